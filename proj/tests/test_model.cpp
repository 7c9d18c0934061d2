#include <stdexcept>
#include <string>

#include "doctest.h"
#include "ermakov/model.hpp"

using namespace ermakov;

TEST_CASE("regime classification splits on the shifted frequency") {
  SystemParams p;
  p.omega0 = 0.0;
  p.gamma = 0.0;
  CHECK(classify_regime(p) == DampingRegime::free_motion);
  p.gamma = 3.0;
  CHECK(classify_regime(p) == DampingRegime::free_motion);

  p.omega0 = 1.0;
  p.gamma = 0.0;
  CHECK(classify_regime(p) == DampingRegime::under_critical);
  p.gamma = 1.0;
  CHECK(classify_regime(p) == DampingRegime::under_critical);
  p.gamma = 2.0;
  CHECK(classify_regime(p) == DampingRegime::aperiodic_limit);
  p.gamma = 2.0 * (1.0 + 1e-14);
  CHECK(classify_regime(p) == DampingRegime::aperiodic_limit);
  p.gamma = 2.1;
  CHECK(classify_regime(p) == DampingRegime::over_damped);
  p.gamma = 4.0;
  CHECK(classify_regime(p) == DampingRegime::over_damped);
}

TEST_CASE("regime and branch names are stable strings") {
  CHECK(std::string(regime_name(DampingRegime::free_motion)) == "free-motion");
  CHECK(std::string(regime_name(DampingRegime::under_critical)) == "under-critical");
  CHECK(std::string(regime_name(DampingRegime::aperiodic_limit)) == "aperiodic-limit");
  CHECK(std::string(regime_name(DampingRegime::over_damped)) == "over-damped");
  CHECK(std::string(branch_name(Branch::plus)) == "plus");
  CHECK(std::string(branch_name(Branch::minus)) == "minus");
  CHECK(std::string(representation_name(Representation::nl)) == "nl");
  CHECK(std::string(representation_name(Representation::ck)) == "ck");
  CHECK(std::string(representation_name(Representation::expanding)) == "expanding");
}

TEST_CASE("characteristic time never exceeds one") {
  SystemParams p;
  CHECK(char_time(p) == 1.0);
  p.omega0 = 4.0;
  CHECK(char_time(p) == 0.25);
  p.gamma = 8.0;
  CHECK(char_time(p) == 0.125);
  p.omega0 = 0.5;
  p.gamma = 0.25;
  CHECK(char_time(p) == 1.0);
}

TEST_CASE("branch helpers carry the sign") {
  InitialState init;
  init.alphadot0_abs = 0.75;
  init.branch = Branch::plus;
  CHECK(signed_alphadot0(init) == 0.75);
  init.branch = Branch::minus;
  CHECK(signed_alphadot0(init) == -0.75);
  CHECK(branch_sign(Branch::plus) == 1.0);
  CHECK(branch_sign(Branch::minus) == -1.0);
}

TEST_CASE("validation collects every violation") {
  SystemParams p;
  InitialState init;
  CHECK_NOTHROW(validate(p, init));

  p.mass = -1.0;
  p.gamma = -0.5;
  init.alpha0 = 0.0;
  try {
    validate(p, init);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("mass") != std::string::npos);
    CHECK(what.find("gamma") != std::string::npos);
    CHECK(what.find("alpha0") != std::string::npos);
  }

  p = SystemParams{};
  init = InitialState{};
  init.alphadot0_abs = -0.1;
  CHECK_THROWS_AS(validate(p, init), std::invalid_argument);
  init = InitialState{};
  p.hbar = 0.0;
  CHECK_THROWS_AS(validate(p, init), std::invalid_argument);
  p = SystemParams{};
  p.omega0 = -2.0;
  CHECK_THROWS_AS(validate(p, init), std::invalid_argument);
}

TEST_CASE("riccati value round-trips through complex") {
  const RiccatiValue v = make_riccati({-0.5, 1.25}, Representation::ck);
  CHECK(v.real_part == -0.5);
  CHECK(v.imag_part == 1.25);
  CHECK(v.representation == Representation::ck);
  CHECK(v.as_complex() == std::complex<double>(-0.5, 1.25));
}
