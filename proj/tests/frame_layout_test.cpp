#include <doctest.h>

#include <stdexcept>

#include "ijam/frame_layout.hpp"
#include "oracles.hpp"

using namespace ijam;

TEST_SUITE("frame_layout") {

TEST_CASE("message plan for the picture payload") {
  const MessagePlan p = plan_message(219600, PhyConfig{});
  CHECK(p.n_frame == 96);
  CHECK(p.l_pad_message_bytes == 1584);
  CHECK(p.psdu_len_bytes == 2332);
  CHECK(p.n_s_total == 96u * 7120u);
}

TEST_CASE("message plan edge sizes") {
  const PhyConfig cfg;
  const MessagePlan exact = plan_message(2304, cfg);
  CHECK(exact.n_frame == 1);
  CHECK(exact.l_pad_message_bytes == 0);
  const MessagePlan tiny = plan_message(1, cfg);
  CHECK(tiny.n_frame == 1);
  CHECK(tiny.l_pad_message_bytes == 2303);
  CHECK_THROWS_AS(plan_message(0, cfg), std::invalid_argument);
}

TEST_CASE("full-size frame layout") {
  const FrameLayout l = layout_frame(2332, PhyConfig{});
  CHECK(l.n_sym == 80);
  CHECK(l.l_pad_bits == 42);
  CHECK(l.t_frame_us == 356);
  CHECK(l.n_samples_frame == 7120);
  CHECK(l.data_window() == SampleRange{720, 7120});
}

TEST_CASE("single-symbol frame") {
  const FrameLayout l = layout_frame(1, PhyConfig{});
  CHECK(l.n_sym == 1);
  CHECK(l.t_frame_us == 40);
}

TEST_CASE("critical window is the last HT-LTF repetition") {
  for (std::size_t len : {1u, 100u, 1500u, 2332u}) {
    const FrameLayout l = layout_frame(len, PhyConfig{});
    CHECK(l.htltf_critical_window == SampleRange{640, 720});
    CHECK(l.window(FieldId::kHtLtf) == SampleRange{480, 720});
  }
}

TEST_CASE("field lookup") {
  const FrameLayout l = layout_frame(2332, PhyConfig{});
  CHECK(field_of_sample(l, 0) == FieldId::kLStf);
  CHECK(field_of_sample(l, 650) == FieldId::kHtLtf);
  CHECK(field_of_sample(l, 719) == FieldId::kHtLtf);
  CHECK(field_of_sample(l, 720) == FieldId::kData);
  CHECK(field_of_sample(l, 7119) == FieldId::kData);
  CHECK_THROWS_AS(field_of_sample(l, 7120), std::out_of_range);
}

TEST_CASE("invalid lengths are rejected") {
  const PhyConfig cfg;
  CHECK_THROWS_AS(layout_frame(0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(layout_frame(2333, cfg), std::invalid_argument);
}

TEST_CASE("invalid configurations are rejected") {
  PhyConfig bad;
  bad.l_dbps = 233;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  PhyConfig zero;
  zero.l_msdu_bytes = 0;
  CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}

TEST_CASE("n_sym matches brute force and windows partition the frame") {
  PhyConfig cfg;
  cfg.l_msdu_bytes = 4000;
  int previous = 0;
  for (std::size_t len = 1; len <= 4000; ++len) {
    const FrameLayout l = layout_frame(len, cfg);
    REQUIRE(l.n_sym == oracle::n_sym_brute(len, cfg.l_dbps));
    REQUIRE(l.n_sym >= previous);
    previous = l.n_sym;
    REQUIRE(l.l_pad_bits >= 0);
    REQUIRE(l.l_pad_bits < cfg.l_dbps);
    std::size_t pos = 0;
    for (const auto& w : l.field_windows) {
      REQUIRE(w.range.begin == pos);
      REQUIRE(w.range.end > w.range.begin);
      pos = w.range.end;
    }
    REQUIRE(pos == l.n_samples_frame);
    REQUIRE(l.n_samples_frame == static_cast<std::size_t>(l.t_frame_us) * 20);
  }
}

TEST_CASE("frame count is monotone with bounded padding") {
  const PhyConfig cfg;
  std::size_t previous = 0;
  for (std::size_t n = 1; n <= 20000; n += 37) {
    const MessagePlan p = plan_message(n, cfg);
    CHECK(p.n_frame >= previous);
    CHECK(p.l_pad_message_bytes < cfg.l_msdu_bytes);
    CHECK(p.n_frame * cfg.l_msdu_bytes == n + p.l_pad_message_bytes);
    previous = p.n_frame;
  }
}

}
