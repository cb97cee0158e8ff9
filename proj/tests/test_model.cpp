#include <doctest.h>

#include <cmath>
#include <limits>

#include "dwls/model.hpp"
#include "support/builders.hpp"

using namespace dwls;

TEST_SUITE("model") {

TEST_CASE("internal_final_pctr examples") {
  CHECK(internal_final_pctr(0.5, 1, 1.0, EvalParams::make(0.5, 60)) == doctest::Approx(0.5));
  CHECK(internal_final_pctr(1.0, 3, 1.0, EvalParams::make(0.5, 60)) == doctest::Approx(0.81));
  CHECK(internal_final_pctr(0.8, 2, 0.25, EvalParams::make(0.5, 60)) == doctest::Approx(0.36));
}

TEST_CASE("zero prominence gives zero pctr") {
  CHECK(internal_final_pctr(0.9, 1, 0.0, EvalParams::make(0.25, 60)) == 0.0);
  CHECK_THROWS_AS(internal_final_pctr(0.9, 0, 0.5, EvalParams::make(0.25, 60)), Error);
}

TEST_CASE("alpha follows beta") {
  CHECK(alpha_for_beta(0.5) == doctest::Approx(2.0));
  CHECK(alpha_for_beta(1.0 / 3.0) == doctest::Approx(1.5));
  CHECK(alpha_for_beta(0.25) == doctest::Approx(4.0 / 3.0));
  CHECK(std::isinf(alpha_for_beta(1.0)));
  CHECK(EvalParams::make(1.0, 60).infinite_alpha());
  CHECK_THROWS_AS(alpha_for_beta(0.0), Error);
  CHECK_THROWS_AS(alpha_for_beta(1.5), Error);
  CHECK_THROWS_AS(EvalParams::make(0.5, 60, 0.0), Error);
  CHECK_THROWS_AS(EvalParams::make(0.5, 60, 0.9, 0), Error);
}

TEST_CASE("query validation") {
  auto q = build::query({1.0, 2.0}, {0.5, 0.5});
  CHECK_NOTHROW(validate(q));

  SUBCASE("negative bid") {
    q.ads[0].bid = -1.0;
    CHECK_THROWS_AS(validate(q), Error);
  }
  SUBCASE("non-finite bid") {
    q.ads[0].bid = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate(q), Error);
  }
  SUBCASE("ctr outside [0,1]") {
    q.ads[1].base_ctr = 1.2;
    CHECK_THROWS_AS(validate(q), Error);
  }
  SUBCASE("blank text") {
    q.ads[1].text = "  ";
    CHECK_THROWS_AS(validate(q), Error);
  }
  SUBCASE("duplicate id") {
    q.ads[1].ad_id = q.ads[0].ad_id;
    CHECK_THROWS_AS(validate(q), Error);
  }
}

TEST_CASE("slot_of is 1-based") {
  AuctionOutcome out;
  out.ordering = {2, 0};
  CHECK(out.slot_of(2) == 1);
  CHECK(out.slot_of(0) == 2);
  CHECK(out.slot_of(1) == 0);
}

}
