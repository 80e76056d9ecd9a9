"""Regenerates the synthetic fixtures (prices, news corpus, labeled seed corpus).

    python3 fixtures/generate.py

Output is deterministic for a given numpy version.
"""

import csv
import datetime as dt
import json
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent
TICKERS = ["AIR.PA", "BA", "ERJ", "GE", "HON", "LMT", "NOC", "RTX"]
START, END = dt.date(2010, 1, 1), dt.date(2020, 3, 6)

POSITIVE = ["strong", "growth", "beat", "record", "upgrade", "profit", "gain", "robust", "raised", "surge"]
NEGATIVE = ["weak", "loss", "miss", "decline", "downgrade", "delay", "grounded", "cut", "lawsuit", "slump"]
NEUTRAL = ["reported", "quarter", "meeting", "announced", "scheduled", "today", "conference", "call", "update", "said"]
FILLER = ["the", "company", "shares", "orders", "deliveries", "aircraft", "revenue", "analysts", "market", "outlook"]


def weekdays(start, end):
    d = start
    while d <= end:
        if d.weekday() < 5:
            yield d
        d += dt.timedelta(days=1)


def write_prices(rng):
    days = list(weekdays(START, END))
    n = len(days)
    t = np.arange(n)
    out = ROOT / "prices"
    out.mkdir(exist_ok=True)
    for i, ticker in enumerate(TICKERS):
        base = 40.0 + 25.0 * i
        drift = 0.0002 + 0.00005 * i
        shocks = rng.normal(drift, 0.012, n)
        trend = base * np.exp(np.cumsum(shocks))
        cycle = 1.0 + 0.05 * np.sin(2 * np.pi * t / (60 + 7 * i) + i) + 0.03 * np.sin(2 * np.pi * t / 250.0)
        close = trend * cycle
        open_ = close * (1.0 + rng.normal(0.0, 0.004, n))
        high = np.maximum(open_, close) * (1.0 + np.abs(rng.normal(0.0, 0.006, n)))
        low = np.minimum(open_, close) * (1.0 - np.abs(rng.normal(0.0, 0.006, n)))
        adj = close * (0.9 + 0.0001 * i)
        volume = np.round(rng.lognormal(15.0 + 0.1 * i, 0.3, n))
        with open(out / f"{ticker}.csv", "w", newline="") as fh:
            fh.write("Date,Open,High,Low,Close,Adj Close,Volume\n")
            for k in range(n):
                fh.write(
                    f"{days[k].isoformat()},{open_[k]:.4f},{high[k]:.4f},{low[k]:.4f},"
                    f"{close[k]:.4f},{adj[k]:.4f},{int(volume[k])}\n"
                )


def sentence(rng, polarity, name):
    pool = {1: POSITIVE, -1: NEGATIVE, 0: NEUTRAL}[polarity]
    words = list(rng.choice(pool, size=2)) + list(rng.choice(FILLER, size=3)) + [name]
    if rng.random() < 0.3:
        words += list(rng.choice(NEUTRAL, size=1))
    rng.shuffle(words)
    text = " ".join(words)
    return text[0].upper() + text[1:]


def write_corpus(rng):
    days = list(weekdays(dt.date(2019, 6, 3), END))
    sources = ["seekingalpha", "forbes", "marketwatch", "twitter"]
    with open(ROOT / "corpus.jsonl", "w") as fh:
        for k in range(120):
            picked = sorted(set(rng.choice(TICKERS, size=int(rng.integers(1, 3)))))
            if k % 3 == 0 and "BA" not in picked:
                picked = sorted(picked + ["BA"])
            name = picked[0].split(".")[0].lower()
            n_sent = int(rng.integers(2, 5))
            text = " ".join(sentence(rng, int(rng.integers(-1, 2)), name) + "." for _ in range(n_sent))
            doc = {
                "id": f"doc-{k:03d}",
                "tickers": picked,
                "date": days[int(rng.integers(0, len(days)))].isoformat(),
                "source": sources[k % len(sources)],
                "text": text,
            }
            fh.write(json.dumps(doc) + "\n")


def write_seed_corpus(rng):
    rows = []
    for label, pool in ((1, POSITIVE), (-1, NEGATIVE), (0, NEUTRAL)):
        for word in pool:
            rows.append((word, label))
        for _ in range(10):
            words = list(rng.choice(pool, size=2)) + list(rng.choice(FILLER, size=2))
            rows.append((" ".join(words), label))
    with open(ROOT / "seed_corpus.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["text", "label"])
        w.writerows(rows)


if __name__ == "__main__":
    rng = np.random.default_rng(20200124)
    write_prices(rng)
    write_corpus(rng)
    write_seed_corpus(rng)
