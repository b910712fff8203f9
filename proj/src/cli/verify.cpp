#include "revwalk/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

namespace revwalk::cli {

namespace {

struct Entry {
  std::string name;
  Kernel kernel;
  /// Bottleneck circle length, 0 otherwise.
  Index bottleneck = 0;
};

std::vector<Entry> builtin_corpus() {
  std::vector<Entry> c;
  Matrix two(2, 2);
  two << 0.3, 0.7, 0.6, 0.4;
  c.push_back({"two_state", kernel_from_rows(two)});
  Matrix sticky(2, 2);
  sticky << 0.9, 0.1, 0.2, 0.8;
  c.push_back({"two_state_lazy", kernel_from_rows(sticky)});
  c.push_back({"circle3", circle_walk(3, 0.75, 0.25)});
  c.push_back({"circle5", circle_walk(5, 0.75, 0.25)});
  c.push_back({"circle5_stay", circle_walk(5, 0.5, 0.0)});
  c.push_back({"cyclic5", cyclic_walk(5, {{1, 0.75}, {-1, 0.25}})});
  c.push_back({"cyclic7", cyclic_walk(7, {{1, 0.75}, {-1, 0.25}})});
  Vector w(4);
  w << 0.1, 0.2, 0.3, 0.4;
  c.push_back({"mixed4", perfectly_mixed(Distribution::from_probs(w))});
  for (Index n : {3, 5, 7}) c.push_back({"bottleneck" + std::to_string(n), bottleneck_graph(n), n});
  return c;
}

class Report {
 public:
  Report(std::string filter) : filter_(std::move(filter)) {}

  bool wants(const std::string& group) const { return filter_.empty() || filter_ == group; }

  void check(const std::string& group, const std::string& name, const std::function<double()>& value,
             double tol) {
    if (!wants(group)) return;
    double v = 0.0;
    try {
      v = value();
    } catch (const Error& e) {
      record(false, group, name, e.what());
      return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e (tol %.0e)", v, tol);
    record(v <= tol, group, name, buf);
  }

  void skip(const std::string& group, const std::string& name, const std::string& why) {
    if (wants(group)) lines_ << "SKIP [" << group << "] " << name << ": " << why << '\n';
  }

  std::string text() const {
    std::ostringstream os;
    os << lines_.str() << passed_ << " passed, " << failed_ << " failed\n";
    return os.str();
  }
  int failed() const { return failed_; }

 private:
  void record(bool ok, const std::string& group, const std::string& name, const std::string& detail) {
    (ok ? passed_ : failed_) += 1;
    lines_ << (ok ? "PASS" : "FAIL") << " [" << group << "] " << name << ": " << detail << '\n';
  }

  std::string filter_;
  std::ostringstream lines_;
  int passed_ = 0;
  int failed_ = 0;
};

void polynomial_checks(Report& rep) {
  for (double e : {0.5, 0.2, 0.05}) {
    for (int d : {2, 4, 8, 16}) {
      const std::string tag = "fast_forward(" + std::to_string(e).substr(0, 4) + "," + std::to_string(d) + ")";
      rep.check("polynomial", tag + " beta = 1",
                [=] { return std::abs(scaling_factor(fast_forward_poly(e, d)) - 1.0); }, 1e-6);
      rep.check("polynomial", tag + " value at 1",
                [=] { return std::abs(fast_forward_poly(e, d)(1.0) - 1.0); }, 1e-9);
    }
  }
  for (double e : {0.2, 0.1, 0.05}) {
    rep.check("polynomial", "selection(" + std::to_string(e).substr(0, 4) + ") constructed",
              [=] { return selection_poly(e)(1.0) >= 1.0 - e ? 0.0 : 1.0; }, 0.0);
  }
}

void kernel_checks(Report& rep, const Entry& entry) {
  const Kernel& p = entry.kernel;
  const std::string& nm = entry.name;
  if (!classify(p).ergodic) {
    rep.skip("markov", nm, "not ergodic");
    return;
  }
  const Distribution pi = stationary_distribution(p);
  const Kernel rev = time_reversal(p, pi);

  rep.check("markov", nm + " stationary", [&] { return stationarity_residual(p, pi); }, 1e-10);
  rep.check("markov", nm + " reversal is an involution",
            [&] { return (time_reversal(rev, pi).matrix() - p.matrix()).cwiseAbs().maxCoeff(); }, 1e-10);

  rep.check("discriminant", nm + " curved similar to P", [&] {
    return spectrum_distance(general_eigenvalues(curved_discriminant(p, pi).entries),
                             general_eigenvalues(p.matrix()));
  }, 1e-8);
  rep.check("discriminant", nm + " flat shared with reversal", [&] {
    return (flat_discriminant(p).entries - flat_discriminant(rev).entries).cwiseAbs().maxCoeff();
  }, 1e-12);
  const Discriminant flat = flat_discriminant(p);
  if (is_primitive(flat)) {
    rep.check("discriminant", nm + " spectrum of D = lambda spectrum of Q", [&] {
      const GeometricRev g = geometric_rev(flat);
      return spectrum_distance(as_complex(Vector(g.lambda_max * symmetric_eigenvalues(
                                   g.mu.amplitudes().asDiagonal() * g.q.matrix() *
                                   g.mu.amplitudes().cwiseInverse().asDiagonal()))),
                               general_eigenvalues(flat.entries));
    }, 1e-8);
    rep.check("discriminant", nm + " overlap bound", [&] {
      const MostReversible m = most_reversible_distribution(flat);
      double second = 0.0;
      for (Index i = 1; i < m.spectrum.size(); ++i) second = std::max(second, std::abs(m.spectrum(i)));
      const double gamma_q = 1.0 - second / m.lambda_max;
      const double bound = 1.0 - (m.lambda_max - pi_average(flat, pi)) / (m.lambda_max * gamma_q);
      const double ov = pi.amplitudes().dot(m.perron);
      return bound < 0.0 ? 0.0 : std::max(0.0, bound - ov * ov);
    }, 1e-10);
  } else {
    rep.skip("discriminant", nm + " geometric reversibilization", "flat discriminant not primitive");
  }

  for (double eps : {0.25, 0.125}) {
    rep.check("spectral", nm + " mixing sandwich eps=" + std::to_string(eps).substr(0, 5), [&] {
      const MixingBounds b = mixing_gap_bounds_check(p, pi, eps, default_t_max(p));
      const double t = static_cast<double>(b.tau);
      return std::max({0.0, b.lower - t, t - b.upper});
    }, 0.0);
  }

  if (p.size() <= 15) {
    const WalkOperator s = swap_op(p.size());
    const IsometryEncoding box = isometry(p), box_rev = isometry(rev);
    rep.check("walk", nm + " flat PUE", [&] { return pue_verify(s, box, box, flat.entries); }, 1e-12);
    rep.check("walk", nm + " curved PUE",
              [&] { return pue_verify(s, box, box_rev, curved_discriminant(p, pi).entries); }, 1e-12);
    rep.check("walk", nm + " chebyshev ladder", [&] {
      const std::vector<Matrix> ladder = chebyshev_ladder(s, box, 32);
      double worst = 0.0;
      for (int m = 0; m <= 32; ++m) {
        worst = std::max(worst, spectral_norm(ladder[static_cast<std::size_t>(m)] -
                                              apply_to_symmetric(ChebyshevPoly::basis(m), flat.entries)));
      }
      return worst;
    }, 1e-9);
    const ChebyshevPoly u = fast_forward_poly(0.2, 8);
    rep.check("walk", nm + " gqet vs eigendecomposition",
              [&] { return spectral_norm(gqet_emulate(s, box, u).block - apply_to_symmetric(u, flat.entries)); },
              1e-8);
    rep.check("walk", nm + " gqsvt vs singular values", [&] {
      return spectral_norm(gqsvt_emulate(s, box, box_rev, u).block -
                           apply_to_singular(u, curved_discriminant(p, pi).entries));
    }, 1e-8);
  }

  if (p.is_group_walk()) {
    rep.check("group", nm + " deviation identity", [&] {
      const GroupDeviation g = group_deviation(p);
      return std::abs(g.lhs - g.rhs);
    }, 1e-10);
  }

  if (entry.bottleneck > 0) {
    const Index n = entry.bottleneck;
    StateSet first, second;
    for (Index x = 0; x < n; ++x) {
      first.push_back(x);
      second.push_back(n + 1 + x);
    }
    const AbsorbingDecomposition decomp = AbsorbingDecomposition::make(p.size(), {first, second});
    for (long j : {1L, static_cast<long>(n), static_cast<long>(n * n)}) {
      rep.check("qsd", nm + " lower bound j=" + std::to_string(j), [&] {
        const QsdBound b = qsd_lower_bound(p, pi, decomp, j);
        return std::max(0.0, b.rhs - b.lhs);
      }, 1e-10);
    }
  }
}

}  // namespace

Exit cmd_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
  static const std::set<std::string> groups = {"markov", "discriminant", "spectral", "walk",
                                               "group",  "qsd",          "polynomial"};
  if (!config.filter.empty() && !groups.count(config.filter)) {
    throw SpecError("unknown filter '" + config.filter + "'");
  }
  std::vector<Entry> corpus = builtin_corpus();
  if (!config.kernel_path.empty()) corpus.push_back({"user", load_kernel_spec(config.kernel_path)});

  Report rep(config.filter);
  polynomial_checks(rep);
  for (const Entry& e : corpus) kernel_checks(rep, e);

  const std::string text = rep.text();
  if (config.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(config.out_path, std::ios::binary);
    if (!f) throw SpecError("cannot write '" + config.out_path + "'");
    f << text;
  }
  return rep.failed() == 0 ? Exit::ok : Exit::verification_failed;
}

}  // namespace revwalk::cli
