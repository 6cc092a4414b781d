#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "fpsop/errors.hpp"
#include "fpsop/weights.hpp"

using namespace fpsop;

TEST(Beta, Presets) {
  EXPECT_DOUBLE_EQ(make_beta(NamedPreset{"dirichlet"})(3), 2.0);
  const auto hardy = make_beta(NamedPreset{"hardy"});
  for (std::size_t n : {0u, 1u, 17u, 5000u}) EXPECT_EQ(hardy(n), 1.0);
  EXPECT_DOUBLE_EQ(make_beta(NamedPreset{"bergman"})(3), 0.5);
  EXPECT_TRUE(hardy.warnings().empty());
}

TEST(Beta, ExplicitListWarnsOnFirstEntry) {
  const auto beta = make_beta(std::vector<double>{2, 1, 1, 1});
  ASSERT_EQ(beta.warnings().size(), 1u);
  EXPECT_NE(beta.warnings()[0].find("β(0)≠1"), std::string::npos);
  EXPECT_EQ(beta(0), 2.0);
  EXPECT_THROW(beta(4), std::out_of_range);
}

TEST(Beta, RejectsBadInput) {
  EXPECT_THROW(make_beta(NamedPreset{"bogus"}), ValidationError);
  EXPECT_THROW(make_beta(std::vector<double>{1, 0}), ValidationError);
  EXPECT_THROW(make_beta(std::vector<double>{1, -2}), ValidationError);
}

TEST(Beta, UnderflowingWeightsKeepTheirLogs) {
  const auto beta = make_beta(GaussianWeight{0.5});
  EXPECT_EQ(beta(100), 0.0);
  EXPECT_DOUBLE_EQ(beta.log(100), -10000.0 * std::log(2.0));
  EXPECT_NEAR(stable_product({beta.factor(100)}, {beta.factor(99)}) / std::pow(2.0, -199.0), 1.0, 1e-11);
}

TEST(Beta, ConcurrentReadsAgree) {
  const auto beta = make_beta(PowerLaw{0.5});
  std::vector<double> a(3000), b(3000);
  std::thread t1([&] {
    for (std::size_t n = 0; n < a.size(); ++n) a[n] = beta(n);
  });
  std::thread t2([&] {
    for (std::size_t n = b.size(); n-- > 0;) b[n] = beta(n);
  });
  t1.join();
  t2.join();
  EXPECT_EQ(a, b);
}

TEST(Delta, PresetsAndExplicit) {
  EXPECT_EQ(DeltaSequence::factorial()(2), 2.0);
  EXPECT_EQ(DeltaSequence::factorial().exact(5), Rational(120));
  EXPECT_EQ(DeltaSequence::inverse_factorial().exact(4), Rational(1, 24));
  const auto d = make_delta(std::vector<Rational>{Rational(1), Rational(1, 2), Rational(1, 4)});
  EXPECT_EQ(d.exact(2), Rational(1, 4));
  EXPECT_THROW(d.exact(3), std::out_of_range);
}

TEST(Delta, FirstValueMustBeOne) {
  try {
    make_delta(std::vector<Rational>{Rational(2), Rational(1)});
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("δ₀ must equal 1"), std::string::npos);
  }
  EXPECT_THROW(make_delta(std::vector<Rational>{Rational(1), Rational(0)}), ValidationError);
}

TEST(Delta, KernelMatchesRatio) {
  for (const auto& delta : {DeltaSequence::factorial(), DeltaSequence::inverse_factorial(),
                            DeltaSequence::geometric(Rational(3, 2)), DeltaSequence::ones()}) {
    for (std::size_t n = 0; n <= 12; ++n) {
      for (std::size_t k = 0; k <= n; ++k) {
        const Rational expected = delta.exact(n) / (delta.exact(k) * delta.exact(n - k));
        EXPECT_EQ(delta.exact_kernel(n, k), expected) << delta.label() << " " << n << "," << k;
        EXPECT_NEAR(delta.kernel(n, k), expected.get_d(), 1e-12 * expected.get_d());
      }
    }
  }
}

TEST(TildeBeta, Examples) {
  const auto hardy = make_beta(NamedPreset{"hardy"});
  const auto dirichlet = make_beta(NamedPreset{"dirichlet"});
  const auto same = tilde_beta(dirichlet, DeltaSequence::ones());
  const auto up = tilde_beta(hardy, DeltaSequence::factorial());
  const auto down = tilde_beta(hardy, DeltaSequence::inverse_factorial());
  for (std::size_t n = 0; n < 40; ++n) {
    EXPECT_DOUBLE_EQ(same(n), dirichlet(n));
    EXPECT_NEAR(up(n), n + 1.0, 1e-12 * (n + 1));
    EXPECT_NEAR(down(n), 1.0 / (n + 1.0), 1e-15);
  }
}

TEST(ConjugateExponent, Examples) {
  EXPECT_EQ(conjugate_exponent(2.0), 2.0);
  EXPECT_TRUE(std::isinf(conjugate_exponent(1.0)));
  EXPECT_DOUBLE_EQ(conjugate_exponent(4.0), 4.0 / 3.0);
  EXPECT_EQ(conjugate_exponent(Rational(4)), Rational(4, 3));
  EXPECT_THROW(conjugate_exponent(0.5), ValidationError);
}

TEST(SpaceConfig, Validates) {
  const auto s = SpaceConfig::make(3.0, 64);
  EXPECT_DOUBLE_EQ(s.q, 1.5);
  EXPECT_EQ(s.l_max, 64u);
  EXPECT_THROW(SpaceConfig::make(0.9), ValidationError);
  EXPECT_THROW(SpaceConfig::make(2.0, 64, 0), ValidationError);
}
