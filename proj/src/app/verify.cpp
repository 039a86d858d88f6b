#include "appraise/app/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "appraise/objectives/spectral_objective.hpp"
#include "appraise/objectives/vendi.hpp"
#include "appraise/objectives/verification.hpp"
#include "appraise/spectral/spectral_state.hpp"

namespace appraise::app {

namespace {

using objectives::Phi;

VerifyItem near(const std::string& name, double got, double want, double tol) {
  std::ostringstream d;
  d.precision(8);
  d << "got " << got << ", expected " << want << " +- " << tol;
  return {name, std::abs(got - want) <= tol, d.str()};
}

Vector random_vector(Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
  return v;
}

// Old and new full spectra (ascending) must interlace in the direction of rho.
bool interlaces(const Vector& before, const Vector& after, double rho, double unorm2, double slack) {
  const Eigen::Index m = before.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (rho > 0) {
      const double hi = i + 1 < m ? before[i + 1] : before[i] + unorm2;
      if (after[i] < before[i] - slack || after[i] > hi + slack) return false;
    } else {
      const double lo = i > 0 ? before[i - 1] : before[i] - unorm2;
      if (after[i] > before[i] + slack || after[i] < lo - slack) return false;
    }
  }
  return true;
}

VerifyItem interlacing_fuzz(std::mt19937_64& rng) {
  int failures = 0;
  int updates = 0;
  while (updates < 1000) {
    const Index m = std::uniform_int_distribution<Index>(2, 16)(rng);
    spectral::SpectralState state(m);
    std::vector<Vector> rows;
    for (int step = 0; step < 25 && updates < 1000; ++step, ++updates) {
      const bool down = rows.size() > 2 && rng() % 3 == 0;
      Vector u;
      Index at = 0;
      if (down) {
        at = std::uniform_int_distribution<Index>(0, rows.size() - 1)(rng);
        u = rows[at];
      } else {
        u = random_vector(m, rng);
      }
      const Update dir = down ? Update::remove : Update::add;
      const double rho = sign_of(dir);
      const Vector before = state.full_spectrum();
      const spectral::SpectrumAfterUpdate q = state.eigenvalues_after_rank_one(u, dir);
      Vector after = Vector::Zero(static_cast<Eigen::Index>(m));
      after.tail(q.eigvals.size()) = q.eigvals;
      const double scale = std::max(before.maxCoeff(), u.squaredNorm());
      const double dtrace = after.sum() - before.sum();
      const bool ok = interlaces(before, after, rho, u.squaredNorm(), 1e-10 * scale) &&
                      std::abs(dtrace - rho * u.squaredNorm()) <= 1e-10 * scale * static_cast<double>(m);
      failures += ok ? 0 : 1;
      state.commit(u, dir);
      if (down) {
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(at));
      } else {
        rows.push_back(u);
      }
    }
  }
  std::ostringstream d;
  d << updates << " updates, " << failures << " violations";
  return {"interlacing fuzz (1000 rank-one updates and downdates)", failures == 0, d.str()};
}

VerifyItem submodularity_fuzz(const std::string& name, const Phi& phi, bool normalize,
                              std::mt19937_64& rng) {
  const Index n = 24;
  const Index m = 8;
  std::normal_distribution<double> g;
  DesignMatrix raw(n, m);
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.cols(); ++j) raw(i, j) = g(rng);
  }
  const auto design = std::make_shared<const DesignMatrix>(
      normalize ? objectives::density_normalize(raw, objectives::Normalization::density_trace1) : raw);
  objectives::SpectralObjective small(design, phi);
  objectives::SpectralObjective large(design, phi);
  int violations = 0;
  double worst = 0.0;
  const int chains = 50;
  int triples = 0;
  for (int c = 0; c < chains; ++c) {
    std::vector<Index> perm(n);
    for (Index i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const Index s_size = std::uniform_int_distribution<Index>(0, 6)(rng);
    const Index t_size = s_size + std::uniform_int_distribution<Index>(1, 8)(rng);
    small.evaluate({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s_size)});
    large.evaluate({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(t_size)});
    for (Index i = t_size; i < n; ++i) {
      const double gap = small.gain(perm[i]) - large.gain(perm[i]);
      worst = std::min(worst, gap);
      violations += gap < -1e-9 ? 1 : 0;
      ++triples;
    }
  }
  std::ostringstream d;
  d << triples << " triples, " << violations << " violations, worst margin " << worst;
  return {name, violations == 0, d.str()};
}

VerifyItem loewner_psd_fuzz(std::mt19937_64& rng) {
  struct Fn {
    std::string name;
    Phi phi;
  };
  const std::vector<Fn> fns = {{"xi1", Phi::neg_xlogx(0.0)}, {"xi2", Phi::log_shift(0.0 + 1e-3)},
                               {"xi3", Phi::power(0.5)},      {"xi4", Phi::neg_power(1.5)}};
  int failures = 0;
  double worst = INFINITY;
  std::uniform_real_distribution<double> u(0.05, 10.0);
  for (const Fn& f : fns) {
    for (int t = 0; t < 50; ++t) {
      const Index size = std::uniform_int_distribution<Index>(2, 6)(rng);
      Vector pts(static_cast<Eigen::Index>(size));
      for (Eigen::Index i = 0; i < pts.size(); ++i) pts[i] = u(rng);
      std::sort(pts.data(), pts.data() + pts.size());
      bool distinct = true;
      for (Eigen::Index i = 1; i < pts.size(); ++i) distinct = distinct && pts[i] > pts[i - 1] * (1 + 1e-6);
      if (!distinct) continue;
      const Matrix l = objectives::loewner_matrix([&](double x) { return -f.phi.derivative(x); },
                                                  [&](double x) { return -f.phi.second_derivative(x); }, pts);
      const double e = objectives::min_eigenvalue(l) / std::max(1.0, l.cwiseAbs().maxCoeff());
      worst = std::min(worst, e);
      failures += e < -1e-9 ? 1 : 0;
    }
  }
  std::ostringstream d;
  d << "200 point sets, " << failures << " with a negative eigenvalue (worst scaled " << worst << ")";
  return {"Loewner PSD for -xi1'..-xi4'", failures == 0, d.str()};
}

}  // namespace

std::vector<VerifyItem> run_verification(std::uint64_t seed) {
  std::vector<VerifyItem> items;

  Vector p123(3);
  p123 << 1, 2, 3;
  const Matrix l1 = objectives::loewner_matrix([](double y) { return -1.0 / (y * y); },
                                               [](double y) { return 2.0 / (y * y * y); }, p123);
  items.push_back(near("Loewner g1 = -y^-2 at (1,2,3): min eigenvalue", objectives::min_eigenvalue(l1),
                       -0.0475019, 1e-5));

  const auto ratio_det = [](double alpha, double x1, double x2) {
    const Phi r = Phi::ratio(alpha);
    Vector p(2);
    p << x1, x2;
    return objectives::loewner_matrix([&](double x) { return -r.derivative(x); },
                                      [&](double x) { return -r.second_derivative(x); }, p)
        .determinant();
  };
  items.push_back(near("Loewner -phi3' (alpha=1/2) at (1,9): determinant", ratio_det(0.5, 1, 9), -3.81e-6, 1e-7));
  for (double alpha : {1.0, 2.0}) {
    const double det = ratio_det(alpha, 1, 2);
    std::ostringstream name, d;
    name << "Loewner -phi3' (alpha=" << alpha << ") at (1,2): negative determinant";
    d << "determinant " << det;
    items.push_back({name.str(), det < 0.0, d.str()});
  }

  const objectives::AntitoneReport ar = objectives::matrix_antitone_counterexample_check();
  items.push_back(near("g2 = -exp(-x): eig(g2(B) - g2(A)) smallest", ar.difference_eigvals[0], -2.0420e-3, 1e-5));
  items.push_back(near("g2 = -exp(-x): eig(g2(B) - g2(A)) middle", ar.difference_eigvals[1], 1.0459e-5, 1e-5));
  items.push_back(near("g2 = -exp(-x): eig(g2(B) - g2(A)) largest", ar.difference_eigvals[2], 5.0462e-2, 1e-5));
  items.push_back({"g2 = -exp(-x): difference is not PSD", !ar.psd, "smallest eigenvalue negative"});
  items.push_back(near("B - A has top eigenvalue 0.3", ar.b_minus_a_eigvals[2], 0.3, 1e-12));

  const objectives::ZetaReport z1 = objectives::zeta_bound(Phi::powerlaw(1.0, 1.0), 0.1);
  const objectives::ZetaReport z2 = objectives::zeta_bound(Phi::satexp(), 0.1);
  items.push_back(near("zeta phi1(alpha=beta=1), rho=0.1", z1.zeta, 0.826, 1e-3));
  items.push_back(near("greedy bound phi1(alpha=beta=1), rho=0.1", z1.greedy_bound, 0.5623, 1e-3));
  items.push_back(near("zeta phi2, rho=0.1", z2.zeta, 0.905, 1e-3));
  items.push_back(near("greedy bound phi2, rho=0.1", z2.greedy_bound, 0.595, 1e-3));

  std::mt19937_64 rng(seed);
  items.push_back(interlacing_fuzz(rng));
  items.push_back(submodularity_fuzz("diminishing returns, log-Vendi on trace-normalized data",
                                     Phi::neg_xlogx(0.0), true, rng));
  items.push_back(submodularity_fuzz("diminishing returns, log-det (t=1e-3)", Phi::log_shift(1e-3), false, rng));
  items.push_back(loewner_psd_fuzz(rng));
  return items;
}

}  // namespace appraise::app
