#include <doctest.h>

#include <cmath>
#include <vector>

#include "lovesim/kernel.hpp"

using namespace lovesim;

TEST_CASE("exponential kernel values and mass") {
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  CHECK(k.mu(0.0) == doctest::Approx(0.5));
  CHECK(k.mu(2.0) == doctest::Approx(0.5 * std::exp(-2.0)));
  CHECK(k.mu_prime(2.0) == doctest::Approx(-0.5 * std::exp(-2.0)));
  CHECK(k.mass() == doctest::Approx(0.5));
  CHECK(k.ell() == doctest::Approx(0.5));
  CHECK(k.tail_mass(1.0) == doctest::Approx(0.5 * std::exp(-1.0)));

  const auto z = MemoryKernel::exponential(0.0, 1.0);
  CHECK(z.mass() == 0.0);
  CHECK(z.ell() == 1.0);

  CHECK_THROWS_AS(MemoryKernel::exponential(-1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(MemoryKernel::exponential(0.5, 0.0), ConfigError);
}

TEST_CASE("polynomial kernel values and mass") {
  const auto k = MemoryKernel::polynomial(1.0, 3.0);
  CHECK(k.mu(0.0) == doctest::Approx(1.0));
  CHECK(k.mu(1.0) == doctest::Approx(std::pow(2.0, -3.0)));
  CHECK(k.mu_prime(1.0) == doctest::Approx(-3.0 * std::pow(2.0, -4.0)));
  // mass = a/(q-1) = 1/2; tail = a (1+t)^{1-q}/(q-1)
  CHECK(k.mass() == doctest::Approx(0.5));
  CHECK(k.tail_mass(1.0) == doctest::Approx(0.5 * 0.25));
  // q <= 1 constructs but has no finite mass
  CHECK_THROWS_AS(MemoryKernel::polynomial(1.0, 1.0).mass(), DomainError);
  CHECK_THROWS_AS(MemoryKernel::polynomial(1.0, 0.5).mass(), DomainError);
  CHECK_THROWS_AS(MemoryKernel::polynomial(1.0, -1.0), ConfigError);
}

TEST_CASE("tabulated kernel interpolates and uses its analytic tail") {
  // Tabulate 0.5 e^{-s} on [0, 10] and declare the matching tail.
  std::vector<double> s, mu;
  for (int i = 0; i <= 1000; ++i) {
    s.push_back(10.0 * i / 1000.0);
    mu.push_back(0.5 * std::exp(-s.back()));
  }
  TabulatedTail tail;
  tail.type = TabulatedTail::Type::Exponential;
  tail.param = 1.0;
  const auto k = MemoryKernel::tabulated(s, mu, tail);
  CHECK(k.mu(0.005) == doctest::Approx(0.5 * std::exp(-0.005)).epsilon(1e-4));
  CHECK(k.mu(20.0) == doctest::Approx(0.5 * std::exp(-20.0)).epsilon(1e-6));
  CHECK(k.mass() == doctest::Approx(0.5).epsilon(1e-4));

  CHECK_THROWS_AS(
      MemoryKernel::tabulated({0.0, 1.0}, {1.0}, tail), ConfigError);
  CHECK_THROWS_AS(
      MemoryKernel::tabulated({1.0, 0.0}, {1.0, 0.5}, tail), ConfigError);
}

TEST_CASE("structural certification passes a valid kernel") {
  const auto rep = certify_hyp1(MemoryKernel::exponential(0.5, 1.0), 64);
  CHECK(rep.pass);
  CHECK(rep.ell == doctest::Approx(0.5).epsilon(1e-10));
  for (const auto& c : rep.clauses) CHECK(c.pass);
  // and the polynomial family too
  CHECK(certify_hyp1(MemoryKernel::polynomial(1.0, 3.0), 64).pass);
}

TEST_CASE("structural certification flags mass >= 1") {
  const auto rep = certify_hyp1(MemoryKernel::exponential(2.0, 1.0), 64);
  CHECK(!rep.pass);
  CHECK(rep.ell == doctest::Approx(-1.0).epsilon(1e-10));
  bool found = false;
  for (const auto& c : rep.clauses)
    if (c.name == "l>0") {
      found = true;
      CHECK(!c.pass);
    }
  CHECK(found);
  CHECK_THROWS_AS(certify_hyp1(MemoryKernel::exponential(0.5, 1.0), 4),
                  DomainError);
}

TEST_CASE("structural certification flags a vanishing kernel") {
  const auto rep = certify_hyp1(MemoryKernel::exponential(0.0, 1.0), 64);
  CHECK(!rep.pass);  // mu(0) = 0
}

TEST_CASE("growth condition: exponential kernel with linear modulus") {
  // mu/H^{-1}(-mu') = (a e^{-bs}) / (a b e^{-bs} / c) = c/b: finite sup,
  // divergent integral.
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  const auto h = ConvexModulus::linear(0.5);
  const auto rep = certify_condition_h(k, h, k.default_s_max(), 1e-10);
  CHECK(rep.sup_finite);
  CHECK(rep.sup == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(!rep.integral_finite);
  CHECK(rep.relaxed_modulus);
  CHECK(!rep.pass);
}

TEST_CASE("growth condition: polynomial kernel with power modulus") {
  // mu = (1+s)^{-3}, H(t) = t^{2.5}: H^{-1}(-mu') ~ s^{-1.6}, so the ratio
  // decays like s^{-1.4}: finite sup, finite integral.
  const auto k = MemoryKernel::polynomial(1.0, 3.0);
  const auto h = ConvexModulus::power(2.5, 1.0);
  const auto rep = certify_condition_h(k, h, k.default_s_max(), 1e-10);
  CHECK(rep.sup_finite);
  CHECK(rep.integral_finite);
  CHECK(rep.pass);
  CHECK(!rep.relaxed_modulus);
  CHECK(rep.sup > 0);
  CHECK(rep.integral > 0);
}

TEST_CASE("growth condition report serializes infinities as sentinels") {
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  const auto rep = certify_condition_h(k, ConvexModulus::linear(1.0),
                                       k.default_s_max(), 1e-10);
  const auto j = rep.to_json();
  CHECK(j.at("integral_finite").get<bool>() == false);
  CHECK(j.at("integral").get<double>() == -1.0);
  CHECK(j.at("sup_finite").get<bool>() == true);
  CHECK(j.at("sup").get<double>() > 0);
}

TEST_CASE("convex modulus evaluation and inverse") {
  const auto lin = ConvexModulus::linear(2.0);
  CHECK(lin.H(3.0) == doctest::Approx(6.0));
  CHECK(lin.H_prime(3.0) == doctest::Approx(2.0));
  CHECK(lin.H_inv(6.0) == doctest::Approx(3.0));
  CHECK(lin.relaxed());

  const auto pow = ConvexModulus::power(2.0, 3.0);
  CHECK(pow.H(2.0) == doctest::Approx(12.0));
  CHECK(pow.H_prime(2.0) == doctest::Approx(12.0));
  CHECK(pow.H_inv(12.0) == doctest::Approx(2.0));
  CHECK(!pow.relaxed());

  for (double t : {1e-4, 0.1, 1.0, 7.5}) {
    CHECK(lin.H_inv(lin.H(t)) == doctest::Approx(t).epsilon(1e-10));
    CHECK(pow.H_inv(pow.H(t)) == doctest::Approx(t).epsilon(1e-10));
  }
  CHECK_THROWS_AS(lin.H_inv(-1.0), DomainError);
  CHECK_THROWS_AS(ConvexModulus::power(1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(ConvexModulus::linear(0.0), ConfigError);
}

TEST_CASE("power moduli are midpoint convex on samples") {
  const auto h = ConvexModulus::power(1.7, 0.8);
  for (double a : {0.0, 0.3, 1.1}) {
    for (double b : {0.5, 2.0, 9.0}) {
      CHECK(h.H(0.5 * (a + b)) <= 0.5 * (h.H(a) + h.H(b)) + 1e-12);
    }
  }
}

TEST_CASE("Young conjugate closed forms") {
  // H(t) = t^r/r has conjugate s^r'/r' with 1/r + 1/r' = 1.
  const auto h2 = ConvexModulus::power(2.0, 0.5);  // H = t^2/2
  CHECK(young_conjugate(h2, 2.0) == doctest::Approx(2.0));
  CHECK(young_conjugate(h2, 0.0) == doctest::Approx(0.0));
  const auto h3 = ConvexModulus::power(3.0, 1.0 / 3.0);  // H = t^3/3
  // conjugate: s^{3/2} * 2/3
  CHECK(young_conjugate(h3, 3.0) ==
        doctest::Approx(2.0 / 3.0 * std::pow(3.0, 1.5)));
  CHECK_THROWS_AS(young_conjugate(ConvexModulus::linear(1.0), 1.0),
                  UnsupportedError);
}

TEST_CASE("Young inequality holds on a sample grid") {
  for (double r : {1.5, 2.0, 3.0}) {
    const auto h = ConvexModulus::power(r, 1.0);
    std::vector<std::pair<double, double>> ab;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j)
        ab.emplace_back(0.5 * i, 0.5 * j);
    CHECK(young_inequality_check(h, ab));
  }
}

TEST_CASE("kernel and modulus JSON factories") {
  const auto k = kernel_from_json(
      nlohmann::json{{"family", "exponential"}, {"a", 0.5}, {"b", 1.0}});
  CHECK(k.mass() == doctest::Approx(0.5));
  const auto kp = kernel_from_json(
      nlohmann::json{{"family", "polynomial"}, {"a", 1.0}, {"q", 3.0}});
  CHECK(kp.family() == KernelFamily::Polynomial);
  const auto m = modulus_from_json(
      nlohmann::json{{"family", "power"}, {"r", 2.5}, {"c", 1.0}});
  CHECK(m.family() == ModulusFamily::Power);

  CHECK_THROWS_AS(kernel_from_json(nlohmann::json{{"family", "bogus"}}),
                  ConfigError);
  CHECK_THROWS_AS(kernel_from_json(nlohmann::json::parse("[1,2]")),
                  ConfigError);
  CHECK_THROWS_AS(
      kernel_from_json(nlohmann::json{{"family", "exponential"}, {"a", "x"}}),
      ConfigError);
  CHECK_THROWS_AS(modulus_from_json(nlohmann::json{{"family", "nope"}}),
                  ConfigError);
}
