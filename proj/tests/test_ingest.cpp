#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "stgan/errors.hpp"
#include "stgan/ingest.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace stgan;

namespace {

fs::path tmp_file(const std::string& name, const std::string& body) {
  const fs::path dir = fs::path(STGAN_TEST_TMP) / "ingest";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++n;
  return n;
}

const char* kHeader = "Date,Open,High,Low,Close,Adj Close,Volume\n";

}  // namespace

TEST(Date, ParsesAndFormats) {
  const Date d = Date::parse("2020-01-24");
  EXPECT_EQ(d.iso(), "2020-01-24");
  EXPECT_EQ(d.weekday(), 4);
  EXPECT_EQ(d.next_weekday().iso(), "2020-01-27");
  EXPECT_EQ(Date::from_ymd(2020, 2, 28).plus_days(1).iso(), "2020-02-29");
  EXPECT_THROW(Date::parse("2020-1-24"), ValidationError);
  EXPECT_THROW(Date::parse("2019-02-29"), ValidationError);
}

TEST(LoadPrices, SingleRow) {
  const auto p = tmp_file("one.csv", std::string(kHeader) + "2020-01-02,10,11,9,10.5,10.4,1000\n");
  const PriceSeries s = load_prices(p, "BA");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].close, 10.5);
  EXPECT_EQ(s.ticker(), "BA");
}

TEST(LoadPrices, RejectsLowAboveHighNamingTheRow) {
  const auto p = tmp_file("bad.csv", std::string(kHeader) + "2020-01-02,10,11,9,10.5,10.4,1000\n" +
                                         "2020-01-03,10,9,12,10.5,10.4,1000\n");
  try {
    load_prices(p, "BA");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST(LoadPrices, RejectsBadHeaderDuplicatesAndNegativeVolume) {
  EXPECT_THROW(load_prices(tmp_file("h.csv", "Date,Open,High,Low,Close,Volume\n"), "X"), ValidationError);
  EXPECT_THROW(load_prices(tmp_file("dup.csv", std::string(kHeader) + "2020-01-02,10,11,9,10,10,1\n" +
                                                   "2020-01-02,10,11,9,10,10,1\n"),
                           "X"),
               ValidationError);
  EXPECT_THROW(load_prices(tmp_file("vol.csv", std::string(kHeader) + "2020-01-02,10,11,9,10,10,-1\n"), "X"),
               ValidationError);
  EXPECT_THROW(load_prices(tmp_file("px.csv", std::string(kHeader) + "2020-01-02,0,11,0,10,10,1\n"), "X"),
               ValidationError);
}

TEST(LoadPrices, MissingFileIsMissingArtifact) {
  EXPECT_THROW(load_prices("/nonexistent/prices.csv", "X"), MissingArtifactError);
}

TEST(LoadPrices, SortsRowsByDate) {
  const auto p = tmp_file("unsorted.csv", std::string(kHeader) + "2020-01-03,10,11,9,10,10,1\n" +
                                              "2020-01-02,10,11,9,10,10,1\n");
  const PriceSeries s = load_prices(p, "X");
  EXPECT_LT(s[0].date, s[1].date);
}

TEST(LoadPrices, FixtureLengthEqualsRowCount) {
  for (const auto& t : support::fixture_tickers()) {
    const fs::path p = support::fixture_dir() / "prices" / (t + ".csv");
    EXPECT_EQ(load_prices(p, t).size(), count_lines(p) - 1) << t;
  }
}

TEST(LoadPrices, WriteReloadRoundTripIsExact) {
  const PriceSeries s = load_prices(support::fixture_dir() / "prices" / "BA.csv", "BA");
  const fs::path out = fs::path(STGAN_TEST_TMP) / "ingest" / "roundtrip.csv";
  write_prices(out, s);
  EXPECT_EQ(load_prices(out, "BA"), s);

  // Values that do not survive a fixed-precision print.
  const PriceSeries odd = support::series_from_closes("X", {0.1 + 0.2, 1.0 / 3.0, 123456.789012345678});
  write_prices(out, odd);
  EXPECT_EQ(load_prices(out, "X"), odd);
}

TEST(SplitTrainTest, DefaultCutoffOnFixture) {
  const PriceSeries s = load_prices(support::fixture_dir() / "prices" / "BA.csv", "BA");
  const auto [train, test] = split_train_test(s, Date::parse("2020-01-24"));
  EXPECT_EQ(train.back().date.iso(), "2020-01-24");
  EXPECT_GE(test.front().date, Date::parse("2020-01-25"));
  EXPECT_EQ(test.back().date.iso(), "2020-03-06");
  EXPECT_EQ(train.size() + test.size(), s.size());
}

TEST(SplitTrainTest, IsAPartition) {
  const PriceSeries s = support::series_from_closes("X", {1, 2, 3, 4, 5, 6});
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto [train, test] = split_train_test(s, s[k].date);
    ASSERT_EQ(train.size(), k + 1);
    std::vector<OhlcvBar> joined(train.bars().begin(), train.bars().end());
    joined.insert(joined.end(), test.bars().begin(), test.bars().end());
    EXPECT_EQ(PriceSeries("X", joined), s);
  }
  EXPECT_TRUE(split_train_test(s, s.back().date).second.empty());
  EXPECT_THROW(split_train_test(s, s.front().date.plus_days(-1)), ValidationError);
  EXPECT_THROW(split_train_test(s, s.back().date.plus_days(30)), ValidationError);
}

TEST(Text, SplitsAndTokenizes) {
  const auto sents = preprocess_text("Good. Bad.");
  ASSERT_EQ(sents.size(), 2u);
  EXPECT_EQ(sents[0], (Sentence{"good"}));
  EXPECT_EQ(sents[1], (Sentence{"bad"}));
  EXPECT_EQ(tokenize("Boeing's 737-MAX, grounded!"), (Sentence{"boeings", "737max", "grounded"}));
  // Terminal punctuation without following whitespace does not split.
  EXPECT_EQ(split_sentences("U.S. shares rose 3.5 percent").size(), 2u);
  EXPECT_EQ(split_sentences("version 3.5 shipped").size(), 1u);
}

TEST(Text, TokenizationIsIdempotent) {
  for (const char* text : {"Hello, World!", "ALL CAPS -- and: punct;", "already tokenized words"}) {
    const Sentence once = tokenize(text);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    EXPECT_EQ(tokenize(joined), once);
  }
}

TEST(LoadCorpus, FixtureHas120Documents) {
  const fs::path p = support::fixture_dir() / "corpus.jsonl";
  const auto docs = load_corpus(p);
  EXPECT_EQ(docs.size(), count_lines(p));
  EXPECT_EQ(docs.size(), 120u);
  for (const auto& d : docs) {
    EXPECT_FALSE(d.sentences.empty());
    for (const auto& s : d.sentences) EXPECT_FALSE(s.empty());
  }
}

TEST(LoadCorpus, MissingFieldNamesTheLine) {
  const auto p = tmp_file("c.jsonl",
                          "{\"id\":\"a\",\"tickers\":[\"BA\"],\"date\":\"2020-01-02\",\"source\":\"x\",\"text\":\"Hi.\"}\n"
                          "{\"id\":\"b\",\"tickers\":[\"BA\"],\"source\":\"x\",\"text\":\"Hi.\"}\n");
  try {
    load_corpus(p);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, WriteReloadRoundTrip) {
  const auto docs = load_corpus(support::fixture_dir() / "corpus.jsonl");
  const fs::path out = fs::path(STGAN_TEST_TMP) / "ingest" / "corpus.jsonl";
  write_corpus(out, docs);
  EXPECT_EQ(load_corpus(out), docs);
}

TEST(SeedCorpus, LoadsFixtureAndRequiresEveryClass) {
  const auto seed = load_seed_corpus(support::fixture_dir() / "seed_corpus.csv");
  EXPECT_NO_THROW(validate_seed_corpus(seed));
  const auto p = tmp_file("seed.csv", "text,label\ngood,1\nbad,-1\n");
  EXPECT_THROW(validate_seed_corpus(load_seed_corpus(p)), ValidationError);
  EXPECT_THROW(load_seed_corpus(tmp_file("seed2.csv", "text,label\ngood,2\n")), ValidationError);
  EXPECT_EQ(split_csv_record("\"a, \"\"quoted\"\" b\",1"), (std::vector<std::string>{"a, \"quoted\" b", "1"}));
}
