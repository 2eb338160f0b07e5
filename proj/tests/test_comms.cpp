#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "mrsearch/comms.hpp"
#include "mrsearch/error.hpp"
#include "oracles.hpp"

using namespace mrsearch;

namespace {

PeerMessage msg(MessageKind kind, int sender, double t, std::uint64_t seq, std::vector<int> cells,
                double y = 0.0, double c = 1.0) {
  return {kind, sender, 0, t, seq, std::move(cells), y, c};
}

std::vector<PeerMessage> random_queue(std::mt19937_64& gen, int n) {
  std::uniform_int_distribution<int> sender(1, 4), cell(0, 15), tick(0, 20);
  std::vector<PeerMessage> q;
  std::vector<std::uint64_t> seq(5, 0);
  for (int i = 0; i < n; ++i) {
    const int s = sender(gen);
    q.push_back(msg(MessageKind::Pose, s, 0.1 * tick(gen), seq[static_cast<std::size_t>(s)]++, {cell(gen)}));
  }
  return q;
}

}  // namespace

TEST_CASE("fusion appends rows per message kind") {
  SensingDataset d;
  d.append({0, 0.0, 1.0, 0, RecordKind::SelfPosition});
  const FusionConfig cfg;

  fuse_message(d, msg(MessageKind::Goal, 2, 0.1, 0, {4, 5, 6}), cfg, 16);
  REQUIRE(d.size() == 4);
  CHECK(d.records()[0].kind == RecordKind::SelfPosition);
  for (int i = 1; i <= 3; ++i) {
    const auto& r = d.records()[static_cast<std::size_t>(i)];
    CHECK(r.kind == RecordKind::PeerGoalCell);
    CHECK(r.cell == 3 + i);
    CHECK(r.y == 0.0);
    CHECK(r.confidence == 0.5);
    CHECK(r.source_robot == 2);
  }

  fuse_message(d, msg(MessageKind::Pose, 2, 0.2, 1, {7}), cfg, 16);
  CHECK(d.records().back() == SensingRecord{7, 0.0, 1.0, 2, RecordKind::PeerPosition});

  fuse_message(d, msg(MessageKind::Track, 3, 0.2, 0, {9}, 1.0, 0.2), cfg, 16);
  CHECK(d.records().back() == SensingRecord{9, 1.0, 0.2, 3, RecordKind::PeerDetection});

  const auto before = d;
  CHECK_THROWS_AS(fuse_message(d, msg(MessageKind::Goal, 2, 0.3, 2, {1, 16}), cfg, 16), Error);
  CHECK_THROWS_AS(fuse_message(d, msg(MessageKind::Track, 2, 0.3, 2, {1}, 1.0, 0.0), cfg, 16), Error);
  CHECK(d == before);
}

TEST_CASE("weak detections leave more uncertainty") {
  const GridSpec g{4, 4, 1.0, {}};
  auto variance_after = [&](double c) {
    SensingDataset d;
    fuse_message(d, msg(MessageKind::Track, 1, 0.0, 0, {5}, 1.0, c), FusionConfig{}, 16);
    const auto post = em_posterior(d, g);
    Eigen::VectorXd gamma;
    const auto ref = oracle::dense_em(d, 16, 100, 1e-6, 0.1, 1.0, &gamma);
    CHECK(post.covariance(5, 5) == doctest::Approx(ref.cov(5, 5)).epsilon(1e-10));
    return post.covariance(5, 5);
  };
  CHECK(variance_after(0.005) > variance_after(1.0));
}

TEST_CASE("a fused peer goal lowers variance of the covered cells") {
  const GridSpec g{4, 4, 1.0, {}};
  SensingDataset d;
  fuse_message(d, msg(MessageKind::Goal, 1, 0.0, 0, {1, 2, 3}), FusionConfig{}, 16);
  const auto post = em_posterior(d, g);
  for (int c : {1, 2, 3}) CHECK(post.covariance(c, c) < post.covariance(10, 10));
}

TEST_CASE("channel delivery") {
  Rng rng = make_stream(1, {0, 2});
  SUBCASE("perfect channel delivers everything in canonical order") {
    std::mt19937_64 gen(2);
    auto q = random_queue(gen, 50);
    const auto res = deliver(q, ChannelConfig{true, 0.0, 0.0}, 10.0, rng);
    CHECK(q.empty());
    CHECK(res.delivered.size() == 50);
    CHECK(res.dropped.empty());
    CHECK(std::is_sorted(res.delivered.begin(), res.delivered.end(), delivery_order));
  }
  SUBCASE("disabled channel delivers nothing") {
    std::mt19937_64 gen(2);
    auto q = random_queue(gen, 20);
    const Rng before = rng;
    const auto res = deliver(q, ChannelConfig{false, 0.0, 0.0}, 10.0, rng);
    CHECK(res.delivered.empty());
    CHECK(res.dropped.size() == 20);
    CHECK(q.empty());
    CHECK(rng == before);
  }
  SUBCASE("drop probability one loses everything") {
    std::mt19937_64 gen(2);
    auto q = random_queue(gen, 20);
    CHECK(deliver(q, ChannelConfig{true, 1.0, 0.0}, 10.0, rng).delivered.empty());
  }
  SUBCASE("latency holds messages back") {
    std::vector<PeerMessage> q{msg(MessageKind::Pose, 1, 0.0, 0, {1}), msg(MessageKind::Pose, 1, 0.5, 1, {2})};
    const ChannelConfig ch{true, 0.0, 0.3};
    auto first = deliver(q, ch, 0.4, rng);
    CHECK(first.delivered.size() == 1);
    CHECK(q.size() == 1);
    auto second = deliver(q, ch, 0.8, rng);
    CHECK(second.delivered.size() == 1);
    CHECK(q.empty());
  }
  SUBCASE("half the messages survive a 0.5 drop rate") {
    std::vector<PeerMessage> q;
    for (int i = 0; i < 10000; ++i) q.push_back(msg(MessageKind::Pose, 1, 0.0, static_cast<std::uint64_t>(i), {0}));
    const auto res = deliver(q, ChannelConfig{true, 0.5, 0.0}, 1.0, rng);
    const double frac = static_cast<double>(res.delivered.size()) / 10000.0;
    CHECK(std::abs(frac - 0.5) < 0.02);
    CHECK(res.delivered.size() + res.dropped.size() == 10000);
  }
}

TEST_CASE("arrival order does not change the outcome") {
  std::mt19937_64 gen(9);
  const auto base = random_queue(gen, 200);
  SensingDataset ref_data;
  std::vector<PeerMessage> ref_dropped;
  for (int perm = 0; perm < 10; ++perm) {
    auto q = base;
    std::shuffle(q.begin(), q.end(), gen);
    Rng rng = make_stream(4, {1, 2});
    const auto res = deliver(q, ChannelConfig{true, 0.3, 0.0}, 5.0, rng);
    SensingDataset d;
    for (const auto& m : res.delivered) fuse_message(d, m, FusionConfig{}, 16);
    if (perm == 0) {
      ref_data = d;
      ref_dropped = res.dropped;
      continue;
    }
    CHECK(d == ref_data);
    CHECK(res.dropped == ref_dropped);
  }
}
