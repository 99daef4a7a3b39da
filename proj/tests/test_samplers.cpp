#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wetmax/distributions.hpp"
#include "wetmax/gof.hpp"
#include "wetmax/montecarlo.hpp"
#include "wetmax/samplers.hpp"

using namespace wetmax;

namespace {

template <class Draw>
std::vector<double> draws(std::size_t n, std::uint64_t seed, Draw&& draw) {
  CounterRng rng(seed);
  return draw_many(n, rng, draw);
}

double ks_against(const std::vector<double>& xs, const std::function<double(double)>& cdf) {
  return ks_one_sample(xs, cdf).ks_distance;
}

double exp_cdf(double x) { return -std::expm1(-x); }

}  // namespace

TEST(Rng, SameSeedSameStream) {
  CounterRng a(99), b(99), c(100);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
  EXPECT_NE(CounterRng(1).substream(0)(), CounterRng(1).substream(1)());
  EXPECT_EQ(CounterRng(1).substream(7)(), CounterRng(1).substream(7)());
}

TEST(Rng, UniformStaysInsideOpenInterval) {
  CounterRng g(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open(g);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Samplers, DeterministicForEveryTag) {
  const ModelParams p(0.6, 1.3, 0.8);
  for (auto tag : kAllRepresentationTags) {
    auto f = [&](CounterRng& g) { return sample_limit(p, tag, g); };
    EXPECT_EQ(draws(500, 17, f), draws(500, 17, f)) << to_string(tag);
  }
  auto nb = [](CounterRng& g) { return static_cast<double>(sample_negbin(NegBinParams(0.8, 0.3), g)); };
  EXPECT_EQ(draws(500, 3, nb), draws(500, 3, nb));
  auto pre = [](CounterRng& g) { return simulate_prelimit_max(100, ModelParams(0.85, 1, 1.5), 0.5, g); };
  EXPECT_EQ(draws(500, 3, pre), draws(500, 3, pre));
}

TEST(Gamma, UnitShapeIsExponential) {
  const auto xs = draws(10000, 1, [](CounterRng& g) { return sample_gamma(GammaParams(1, 1), g); });
  EXPECT_LT(ks_against(xs, exp_cdf), 0.0136);
}

TEST(Gamma, MeanIsShapeOverRate) {
  const auto xs = draws(100000, 2, [](CounterRng& g) { return sample_gamma(GammaParams(0.876, 2), g); });
  const auto ms = oracle::mean_se(xs);
  EXPECT_LT(std::abs(ms.mean - 0.438), 3 * ms.se);
}

TEST(Gamma, SmallShapeMatchesDensity) {
  // d.f. of G_{0.3} by quadrature of the gamma density, singular at 0
  const GammaParams gp(0.3, 1.0);
  const auto xs = draws(10000, 4, [&](CounterRng& g) { return sample_gamma(gp, g); });
  auto cdf = [&](double x) {
    return oracle::integrate([&](double t) { return t > 0 ? gamma_pdf(t, gp) : 0.0; }, 0.0, x);
  };
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> grid;
  for (std::size_t i = 99; i < sorted.size(); i += 100) grid.push_back(sorted[i]);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    worst = std::max(worst, std::abs(cdf(grid[k]) - static_cast<double>(100 * (k + 1)) / 1e4));
  }
  EXPECT_LT(worst, ks_critical_1pct(10000));
}

TEST(Gamma, ScaleEquivariance) {
  const auto a = draws(10000, 5, [](CounterRng& g) { return sample_gamma(GammaParams(0.7, 1), g) / 3.0; });
  const auto b = draws(10000, 6, [](CounterRng& g) { return sample_gamma(GammaParams(0.7, 3), g); });
  EXPECT_LT(ks_two_sample(a, b).ks_distance, ks_critical_1pct(10000, 10000));
}

TEST(Weibull, UnitExponentIsExponential) {
  const auto xs = draws(10000, 7, [](CounterRng& g) { return sample_weibull(1.0, g); });
  EXPECT_LT(ks_against(xs, exp_cdf), ks_critical_1pct(10000));
}

TEST(Weibull, ProbabilityBelowOneDoesNotDependOnExponent) {
  const auto xs = draws(100000, 8, [](CounterRng& g) { return sample_weibull(0.5, g) < 1.0 ? 1.0 : 0.0; });
  const auto ms = oracle::mean_se(xs);
  EXPECT_LT(std::abs(ms.mean - (1.0 - std::exp(-1.0))), 3 * ms.se);
}

TEST(Weibull, ExponentialOverStableIsWeibull) {
  const double gamma = 0.6;
  const auto a = draws(10000, 9, [&](CounterRng& g) {
    const double w = sample_exponential(g);
    return w / sample_stable_onesided(StableIndex(gamma), g);
  });
  const auto b = draws(10000, 10, [&](CounterRng& g) { return sample_weibull(gamma, g); });
  EXPECT_LT(ks_two_sample(a, b).ks_distance, ks_critical_1pct(10000, 10000));
}

TEST(Stable, UnitIndexIsDegenerate) {
  CounterRng g(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_stable_onesided(StableIndex(1.0), g), 1.0);
}

TEST(Stable, FractionalMoment) {
  const auto xs =
      draws(1000000, 11, [](CounterRng& g) { return std::pow(sample_stable_onesided(StableIndex(0.5), g), 0.25); });
  const auto ms = oracle::mean_se(xs);
  EXPECT_LT(std::abs(ms.mean - stable_moment(0.5, 0.25)), 3 * ms.se);
}

TEST(Stable, HalfIndexIsLevy) {
  const auto xs = draws(10000, 12, [](CounterRng& g) { return sample_stable_onesided(StableIndex(0.5), g); });
  EXPECT_LT(ks_against(xs, levy_cdf), ks_critical_1pct(10000));
}

TEST(Stable, StabilityIdentity) {
  const double alpha = 0.7;
  const StableIndex idx(alpha);
  const auto a = draws(10000, 13, [&](CounterRng& g) {
    const double s = sample_stable_onesided(idx, g);
    return (s + sample_stable_onesided(idx, g)) / std::pow(2.0, 1.0 / alpha);
  });
  const auto b = draws(10000, 14, [&](CounterRng& g) { return sample_stable_onesided(idx, g); });
  EXPECT_LT(ks_two_sample(a, b).ks_distance, ks_critical_1pct(10000, 10000));
}

TEST(StableRatio, SelfReciprocal) {
  const auto a = draws(10000, 15, [](CounterRng& g) { return sample_stable_ratio(0.6, g); });
  const auto b = draws(10000, 16, [](CounterRng& g) { return 1.0 / sample_stable_ratio(0.6, g); });
  EXPECT_LT(ks_two_sample(a, b).ks_distance, ks_critical_1pct(10000, 10000));
}

TEST(StableRatio, MedianIsOne) {
  const auto xs = draws(100000, 17, [](CounterRng& g) { return sample_stable_ratio(0.5, g) < 1.0 ? 1.0 : 0.0; });
  const auto ms = oracle::mean_se(xs);
  EXPECT_LT(std::abs(ms.mean - 0.5), 3 * ms.se);
}

TEST(StableRatio, HistogramMatchesDensity) {
  const double alpha = 0.7;
  const std::size_t n = 100000;
  const auto xs = draws(n, 18, [&](CounterRng& g) { return sample_stable_ratio(alpha, g); });
  // 40 log-spaced cells on [1e-3, 1e3] plus the two tails; expected mass by quadrature
  std::vector<double> edges{0.0};
  for (int i = 0; i <= 40; ++i) edges.push_back(std::pow(10.0, -3.0 + 6.0 * i / 40));
  edges.push_back(INFINITY);
  auto v = [&](double x) { return x > 0 ? stable_ratio_density(x, alpha) : 0.0; };
  std::vector<double> observed(edges.size() - 1, 0.0), expected(edges.size() - 1, 0.0);
  for (double x : xs) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    observed[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
  }
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    const double mass = std::isinf(edges[c + 1]) ? oracle::integrate_to_inf(v, edges[c])
                                                 : oracle::integrate(v, edges[c], edges[c + 1]);
    expected[c] = mass * static_cast<double>(n);
  }
  const auto [stat, dof] = oracle::pearson(observed, expected);
  EXPECT_GT(oracle::chi2_upper_tail(stat, dof), 0.01);
}

TEST(MixingZ, AtLeastMu) {
  CounterRng g(19);
  for (int i = 0; i < 100000; ++i) ASSERT_GE(sample_Z(0.5, 2.0, g), 2.0);
}

TEST(MixingZ, TailMatchesQuadrature) {
  const double r = 0.5, mu = 1.0;
  const auto xs = draws(100000, 20, [&](CounterRng& g) { return sample_Z(r, mu, g); });
  for (double z : {1.01, 1.1, 1.3, 1.6, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
    const double tail = oracle::integrate_to_inf([&](double t) { return mixing_density_z(t, r, mu); }, z);
    const double empirical =
        static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](double x) { return x > z; })) / 1e5;
    EXPECT_LT(std::abs(empirical - tail), 0.01) << "z=" << z;
  }
}

TEST(MixingZ, ScalesWithMu) {
  const auto a = draws(10000, 21, [](CounterRng& g) { return sample_Z(0.4, 2.5, g); });
  const auto b = draws(10000, 22, [](CounterRng& g) { return 2.5 * sample_Z(0.4, 1.0, g); });
  EXPECT_LT(ks_two_sample(a, b).ks_distance, ks_critical_1pct(10000, 10000));
}

TEST(MixingZ, RejectsShapeOne) {
  CounterRng g(1);
  EXPECT_THROW(sample_Z(1.0, 1.0, g), InvalidArgument);
}

TEST(SnedecorFisher, MatchesItsDistributionFunction) {
  // Q_{r,1} has d.f. (r x / (1 + r x))^r, the limit law with lambda = r and gamma = 1
  const double r = 0.876;
  const auto xs = draws(10000, 23, [&](CounterRng& g) { return sample_snedecor_fisher(r, g); });
  EXPECT_LT(ks_against(xs, [&](double x) { return limit_cdf(x, ModelParams(r, r, 1.0)); }),
            ks_critical_1pct(10000));
}

TEST(LimitSampler, DirectUnitCase) {
  const auto xs = draws(10000, 24, [](CounterRng& g) { return sample_limit(ModelParams(1, 1, 1), RepresentationTag::Direct, g); });
  EXPECT_LT(ks_against(xs, [](double x) { return x / (1 + x); }), 0.0136);
}

TEST(LimitSampler, DirectAgreesWithFoldedNormal) {
  const ModelParams p(0.876, 1.0, 0.9);
  const auto a = draws(10000, 25, [&](CounterRng& g) { return sample_limit(p, RepresentationTag::Direct, g); });
  const auto b = draws(10000, 26, [&](CounterRng& g) { return sample_limit(p, RepresentationTag::FoldedNormal, g); });
  EXPECT_LT(ks_two_sample(a, b).ks_distance, ks_critical_1pct(10000, 10000));
}

TEST(LimitSampler, MixedExponentialMatchesLimitLaw) {
  const ModelParams p(0.5, 2.0, 0.8);
  const auto xs = draws(100000, 27, [&](CounterRng& g) { return sample_limit(p, RepresentationTag::MixedExponential, g); });
  EXPECT_LT(ks_against(xs, [&](double x) { return limit_cdf(x, p); }), ks_critical_1pct(100000));
}

TEST(LimitSampler, AllTagsAgreePairwise) {
  const ModelParams p(0.7, 1.3, 0.8);
  std::vector<std::vector<double>> samples;
  std::uint64_t seed = 100;
  for (auto tag : kAllRepresentationTags) {
    samples.push_back(draws(10000, seed++, [&](CounterRng& g) { return sample_limit(p, tag, g); }));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      EXPECT_LT(ks_two_sample(samples[i], samples[j]).ks_distance, 1.628 * std::sqrt(2.0 / 10000))
          << to_string(kAllRepresentationTags[i]) << " vs " << to_string(kAllRepresentationTags[j]);
    }
  }
}

TEST(LimitSampler, EveryTagMatchesLimitLaw) {
  for (const ModelParams& p : {ModelParams(0.3, 0.5, 0.4), ModelParams(1.0, 2.0, 1.0), ModelParams(0.9, 1.0, 0.35)}) {
    std::uint64_t seed = 200;
    for (auto tag : kAllRepresentationTags) {
      const auto xs = draws(10000, seed++, [&](CounterRng& g) { return sample_limit(p, tag, g); });
      for (double x : xs) ASSERT_TRUE(x > 0.0 && std::isfinite(x)) << to_string(tag);
      EXPECT_LT(ks_against(xs, [&](double x) { return limit_cdf(x, p); }), ks_critical_1pct(10000))
          << to_string(tag) << " r=" << p.r() << " gamma=" << p.gamma();
    }
  }
}

TEST(LimitSampler, DirectAndSnedecorFisherAcceptLargeExponents) {
  const ModelParams p(2.5, 0.7, 1.8);
  for (auto tag : {RepresentationTag::Direct, RepresentationTag::SnedecorFisher}) {
    const auto xs = draws(10000, 300, [&](CounterRng& g) { return sample_limit(p, tag, g); });
    EXPECT_LT(ks_against(xs, [&](double x) { return limit_cdf(x, p); }), ks_critical_1pct(10000)) << to_string(tag);
  }
}

TEST(LimitSampler, RepresentationDomain) {
  CounterRng g(1);
  EXPECT_THROW(sample_limit(ModelParams(0.5, 1, 1.5), RepresentationTag::StableForm, g), RepresentationDomainError);
  EXPECT_THROW(sample_limit(ModelParams(1.5, 1, 0.5), RepresentationTag::ParetoRatio, g), RepresentationDomainError);
  EXPECT_NO_THROW(sample_limit(ModelParams(1.5, 1, 1.5), RepresentationTag::Direct, g));
}

TEST(LimitSampler, TagNamesRoundTrip) {
  for (auto tag : kAllRepresentationTags) EXPECT_EQ(parse_representation_tag(to_string(tag)), tag);
  EXPECT_FALSE(parse_representation_tag("nope").has_value());
}

TEST(LimitSampler, MomentsBelowHalfTailExponent) {
  const ModelParams p(0.8, 1.5, 1.2);
  for (double frac : {0.15, 0.3, 0.45}) {
    const double delta = frac * p.gamma();
    const auto xs = draws(100000, 400, [&](CounterRng& g) {
      return std::pow(sample_limit(p, RepresentationTag::Direct, g), delta);
    });
    const auto ms = oracle::mean_se(xs);
    EXPECT_LT(std::abs(ms.mean - limit_moment(delta, p)), 3 * ms.se) << "delta=" << delta;
  }
}

TEST(Prelimit, EmptyCountGivesZero) {
  // p_n = q = 0.9 and r = 2 make N = 0 with probability 0.81
  CounterRng g(1);
  int zeros = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = simulate_prelimit_max(1, ModelParams(2.0, 5.0, 1.0), 0.9, g);
    ASSERT_GE(x, 0.0);
    zeros += x == 0.0;
  }
  EXPECT_GT(zeros, 700);
}

TEST(Prelimit, ApproachesLimitLaw) {
  const ModelParams p(0.85, 1.0, 1.5);
  const auto xs = draws(4000, 500, [&](CounterRng& g) { return simulate_prelimit_max(10000, p, 0.5, g); });
  EXPECT_LT(ks_against(xs, [&](double x) { return limit_cdf(x, p); }), 0.05);
}

TEST(Prelimit, RejectsBadArguments) {
  CounterRng g(1);
  EXPECT_THROW(simulate_prelimit_max(0, ModelParams(1, 1, 1), 0.5, g), InvalidArgument);
  EXPECT_THROW(simulate_prelimit_max(10, ModelParams(1, 1, 1), 1.0, g), InvalidArgument);
}

TEST(NegBin, GeometricTail) {
  const auto xs = draws(100000, 600, [](CounterRng& g) { return static_cast<double>(sample_negbin(NegBinParams(1.0, 0.3), g)); });
  for (int m = 1; m <= 5; ++m) {
    std::vector<double> ind;
    ind.reserve(xs.size());
    for (double x : xs) ind.push_back(x >= m ? 1.0 : 0.0);
    const auto ms = oracle::mean_se(ind);
    EXPECT_LT(std::abs(ms.mean - std::pow(0.7, m)), 3 * ms.se) << "m=" << m;
  }
}

TEST(NegBin, Mean) {
  const NegBinParams nb(0.847, 0.322);
  const auto xs = draws(100000, 601, [&](CounterRng& g) { return static_cast<double>(sample_negbin(nb, g)); });
  const auto ms = oracle::mean_se(xs);
  EXPECT_NEAR(nb.mean(), 1.783, 1e-3);
  EXPECT_LT(std::abs(ms.mean - nb.mean()), 3 * ms.se);
}

TEST(NegBin, ChiSquareAgainstPmf) {
  const NegBinParams nb(0.5, 0.4);
  const std::size_t n = 100000;
  const auto xs = draws(n, 602, [&](CounterRng& g) { return static_cast<double>(sample_negbin(nb, g)); });
  std::vector<double> observed(60, 0.0), expected(60, 0.0);
  for (double x : xs) observed[std::min<std::size_t>(static_cast<std::size_t>(x), 59)] += 1.0;
  double head = 0.0;
  for (int k = 0; k < 59; ++k) {
    expected[k] = negbin_pmf(k, nb) * static_cast<double>(n);
    head += negbin_pmf(k, nb);
  }
  expected[59] = (1.0 - head) * static_cast<double>(n);
  const auto [stat, dof] = oracle::pearson(observed, expected);
  EXPECT_GT(oracle::chi2_upper_tail(stat, dof), 0.01);
}

TEST(Poisson, ChiSquareBothRegimes) {
  for (double mean : {0.7, 4.0, 12.0, 250.0}) {
    const std::size_t n = 100000;
    const auto xs = draws(n, 700, [&](CounterRng& g) { return static_cast<double>(sample_poisson(mean, g)); });
    const std::size_t cells = static_cast<std::size_t>(mean + 12 * std::sqrt(mean) + 20);
    std::vector<double> observed(cells, 0.0), expected(cells, 0.0);
    for (double x : xs) observed[std::min(static_cast<std::size_t>(x), cells - 1)] += 1.0;
    double head = 0.0;
    for (std::size_t k = 0; k + 1 < cells; ++k) {
      const double pk = std::exp(-mean + static_cast<double>(k) * std::log(mean) - log_gamma(static_cast<double>(k) + 1.0));
      expected[k] = pk * static_cast<double>(n);
      head += pk;
    }
    expected[cells - 1] = std::max(0.0, 1.0 - head) * static_cast<double>(n);
    const auto [stat, dof] = oracle::pearson(observed, expected);
    EXPECT_GT(oracle::chi2_upper_tail(stat, dof), 0.01) << "mean=" << mean;
  }
}
