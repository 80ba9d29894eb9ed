#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gad/error.hpp"
#include "gad/flowfeat.hpp"
#include "oracles.hpp"

namespace {

using gad::Direction;

gad::FlowRecord flow(std::vector<gad::Packet> packets) { return {"f", std::move(packets), {}}; }

TEST(Featurize, PerfectAlternationIsPadded) {
  const auto v = gad::featurize(flow({{100, Direction::cs}, {200, Direction::sc}}), 2);
  EXPECT_EQ(v.values, (std::vector<double>{100, 200, 0, 0}));
  EXPECT_FALSE(v.empty);
}

TEST(Featurize, StrictlyServerToClientFillsClientSlotsWithZeros) {
  const auto v = gad::featurize(flow({{100, Direction::sc}, {200, Direction::sc}}), 2);
  EXPECT_EQ(v.values, (std::vector<double>{0, 100, 0, 200}));
}

TEST(Featurize, RepeatedDirectionInsertsZero) {
  const auto v = gad::featurize(
      flow({{50, Direction::cs}, {60, Direction::cs}, {70, Direction::sc}}), 3);
  EXPECT_EQ(v.values, (std::vector<double>{50, 0, 60, 70, 0, 0}));
}

TEST(Featurize, OnlyTheFirstNPacketsCount) {
  const auto v = gad::featurize(
      flow({{1, Direction::cs}, {2, Direction::sc}, {3, Direction::cs}, {4, Direction::sc}}), 1);
  EXPECT_EQ(v.values, (std::vector<double>{1, 0}));
}

TEST(Featurize, EmptyFlowIsFlagged) {
  const auto v = gad::featurize(flow({}), 3);
  EXPECT_TRUE(v.empty);
  EXPECT_EQ(v.values, std::vector<double>(6, 0.0));
  EXPECT_THROW(gad::featurize(flow({}), 0), gad::DomainError);
}

TEST(Featurize, ServerLeadConvention) {
  const auto v = gad::featurize(flow({{7, Direction::cs}}), 1, Direction::sc);
  EXPECT_EQ(v.values, (std::vector<double>{0, 7}));
}

TEST(Featurize, RandomSequencesKeepTheInvariants) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 25), size(1, 1500);
  std::uniform_int_distribution<std::size_t> n_dist(1, 12);
  std::bernoulli_distribution dir(0.5);
  for (int trial = 0; trial < 10'000; ++trial) {
    std::vector<gad::Packet> packets(static_cast<std::size_t>(len(rng)));
    for (auto& p : packets)
      p = {static_cast<std::uint64_t>(size(rng)), dir(rng) ? Direction::cs : Direction::sc};
    const std::size_t n = n_dist(rng);
    const auto v = gad::featurize(flow(packets), n);
    ASSERT_EQ(v.values.size(), 2 * n);
    ASSERT_EQ(v.values, oracle::reference_slots(packets, n, Direction::cs));
    std::vector<double> nonzero;
    for (std::size_t s = 0; s < v.values.size(); ++s) {
      if (v.values[s] == 0.0) continue;
      nonzero.push_back(v.values[s]);
      // Slot parity encodes direction.
      const std::size_t k = nonzero.size() - 1;
      ASSERT_EQ(s % 2 == 0, packets[k].direction == Direction::cs);
    }
    const std::size_t used = std::min(n, packets.size());
    ASSERT_EQ(nonzero.size(), used);
    for (std::size_t k = 0; k < used; ++k) ASSERT_EQ(nonzero[k], static_cast<double>(packets[k].size));
  }
}

TEST(Ingest, EmptyInputGivesNoFlows) {
  std::istringstream in("");
  const auto r = gad::ingest_flows(in);
  EXPECT_TRUE(r.flows.empty());
  EXPECT_TRUE(r.errors.empty());
}

TEST(Ingest, ParsesOneFlow) {
  std::istringstream in(
      R"({"flow_id": "a1", "packets": [{"size": 60, "dir": "cs"}, {"size": 1500, "dir": "sc"}, {"size": 40, "dir": "cs"}], "label": "web"})"
      "\n\n");
  const auto r = gad::ingest_flows(in);
  ASSERT_EQ(r.flows.size(), 1u);
  EXPECT_EQ(r.flows[0].flow_id, "a1");
  EXPECT_EQ(r.flows[0].packets.size(), 3u);
  EXPECT_EQ(r.flows[0].packets[1].size, 1500u);
  EXPECT_EQ(r.flows[0].packets[1].direction, Direction::sc);
  EXPECT_EQ(r.flows[0].label, "web");
}

TEST(Ingest, NegativeSizeIsRejectedWithLineNumber) {
  const std::string text =
      R"({"flow_id": "ok", "packets": []})"
      "\n"
      R"({"flow_id": "bad", "packets": [{"size": -5, "dir": "cs"}]})"
      "\n";
  std::istringstream lenient(text);
  const auto r = gad::ingest_flows(lenient);
  ASSERT_EQ(r.flows.size(), 1u);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 2u);
  std::istringstream strict(text);
  try {
    gad::ingest_flows(strict, true);
    FAIL();
  } catch (const gad::DataQualityError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(Ingest, MalformedJsonAndDirections) {
  std::istringstream in("{not json}\n{\"flow_id\": \"x\", \"packets\": [{\"size\": 3, \"dir\": \"up\"}]}\n");
  const auto r = gad::ingest_flows(in);
  EXPECT_EQ(r.errors.size(), 2u);
  EXPECT_THROW(gad::ingest_flows(std::filesystem::path("/nonexistent/flows.jsonl")), gad::IoError);
}

TEST(Ingest, ToBatchNamesColumns) {
  std::vector<gad::FlowFeatureVector> v{gad::featurize({"x", {{5, Direction::cs}}, "bot"}, 2)};
  const auto batch = gad::to_batch(v, 2);
  EXPECT_EQ(batch.feature_names(), (std::vector<std::string>{"p1", "p2", "p3", "p4"}));
  EXPECT_EQ(batch.id(0), "x");
  EXPECT_EQ(batch.labels()[0], "bot");
}

}  // namespace
