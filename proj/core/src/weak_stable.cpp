#include "iet/weak_stable.hpp"

#include <algorithm>
#include <cmath>

namespace iet {

double distance_to_lattice(const Eigen::VectorXd& v) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    double r = v(i) - std::round(v(i));
    s += r * r;
  }
  return std::sqrt(s);
}

LineSegment LineSegment::through(const Eigen::VectorXd& point, const Eigen::VectorXd& dir) {
  LineSegment j;
  double n = dir.norm();
  if (!(n > 0)) throw InputError("line direction must be nonzero");
  j.direction = dir / n;
  j.offset = point - point.dot(j.direction) * j.direction;
  j.norm = j.offset.norm();
  return j;
}

double LineSegment::half_chord(double delta) const {
  return norm < delta ? std::sqrt(delta * delta - norm * norm) : 0.0;
}

namespace {

bool less_vec(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

void sort_unique(std::vector<Eigen::VectorXi>& v) {
  std::sort(v.begin(), v.end(), less_vec);
  v.erase(std::unique(v.begin(), v.end(), [](const auto& a, const auto& b) { return a == b; }), v.end());
}

Eigen::VectorXi round_vec(const Eigen::VectorXd& x) {
  Eigen::VectorXi c(x.size());
  for (int i = 0; i < x.size(); ++i) c(i) = static_cast<int>(std::lround(x(i)));
  return c;
}

// Parameter range s in [0,1] where |p + s d - c| < delta, if any.
bool clip_to_ball(const Eigen::VectorXd& p, const Eigen::VectorXd& d, const Eigen::VectorXd& c, double delta,
                  double& lo, double& hi) {
  Eigen::VectorXd pc = p - c;
  double a = d.squaredNorm();
  double b = 2.0 * d.dot(pc);
  double cc = pc.squaredNorm() - delta * delta;
  if (a == 0.0) {
    if (cc < 0) {
      lo = 0.0;
      hi = 1.0;
      return true;
    }
    return false;
  }
  double disc = b * b - 4 * a * cc;
  if (disc <= 0) return false;
  double sq = std::sqrt(disc);
  double s1 = (-b - sq) / (2 * a), s2 = (-b + sq) / (2 * a);
  lo = std::max(0.0, s1);
  hi = std::min(1.0, s2);
  return lo < hi;
}

constexpr double kSearchLimit = 1e9;

struct EndpointTransport {
  Eigen::MatrixXd x;

  void operator()(int i, int j, double c) {
    x.row(i) += c * x.row(j);
    if (x.row(i).cwiseAbs().maxCoeff() > kSearchLimit) throw CapExceeded("segment too long for the lattice search");
  }
  void moved(int) {}
};

}  // namespace

std::vector<Eigen::VectorXi> lattice_points_near_segment(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                                         double delta) {
  if (!(delta > 0 && delta < 0.5)) throw InputError("delta must lie in (0, 1/2) for lattice searches");
  const Eigen::VectorXd d = q - p;
  if (p.cwiseAbs().maxCoeff() > kSearchLimit || q.cwiseAbs().maxCoeff() > kSearchLimit || d.lpNorm<1>() > 1e7)
    throw CapExceeded("segment too long for the lattice search");
  // Since delta < 1/2, any c within delta of a point x of the segment is the
  // componentwise rounding of x; rounding only changes at half-integers.
  std::vector<double> cuts{0.0, 1.0};
  for (int i = 0; i < p.size(); ++i) {
    if (d(i) == 0.0) continue;
    double a = std::min(p(i), q(i)), b = std::max(p(i), q(i));
    for (double k = std::ceil(a - 0.5); k + 0.5 <= b; k += 1.0) {
      double s = (k + 0.5 - p(i)) / d(i);
      if (s > 0.0 && s < 1.0) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Eigen::VectorXi> cand;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    cand.push_back(round_vec(p + mid * d));
  }
  cand.push_back(round_vec(p));
  cand.push_back(round_vec(q));
  sort_unique(cand);
  std::vector<Eigen::VectorXi> out;
  for (const auto& c : cand) {
    double lo, hi;
    if (clip_to_ball(p, d, c.cast<double>(), delta, lo, hi)) out.push_back(c);
  }
  return out;
}

ChildSet children(const LineSegment& j, const IntMatrix& a, double delta) {
  if (!(delta > 0 && delta < 0.1)) throw InputError("delta must lie in (0, 1/10)");
  ChildSet out;
  const double half = j.half_chord(delta);
  if (half == 0.0) return out;
  const Eigen::MatrixXd m = a.to_eigen();
  const Eigen::VectorXd ao = m * j.offset;
  const Eigen::VectorXd au = m * j.direction;
  LineSegment image = LineSegment::through(ao, au);
  if (image.norm < delta) out.trivial = image;
  auto anchors = lattice_points_near_segment(ao - half * au, ao + half * au, delta);
  for (const auto& c : anchors) {
    if (c.isZero()) continue;
    out.nontrivial.push_back({LineSegment::through(ao - c.cast<double>(), au), c});
  }
  return out;
}

std::vector<Eigen::VectorXi> children_sampling_oracle(const LineSegment& j, const IntMatrix& a, double delta,
                                                      long samples) {
  std::vector<Eigen::VectorXi> out;
  const double half = j.half_chord(delta);
  if (half == 0.0 || samples < 2) return out;
  const Eigen::MatrixXd m = a.to_eigen();
  const Eigen::VectorXd ao = m * j.offset;
  const Eigen::VectorXd au = m * j.direction;
  for (long i = 0; i < samples; ++i) {
    // Interior grid of the open chord.
    double s = -half + 2.0 * half * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    Eigen::VectorXd x = ao + s * au;
    Eigen::VectorXi c = round_vec(x);
    if (c.isZero()) continue;
    if ((x - c.cast<double>()).norm() < delta) out.push_back(c);
  }
  sort_unique(out);
  return out;
}

SampleOutcome survival_generations(const SimplexSystem& sys, std::vector<Real> lambda, const LineSegment& j,
                                   const SurvivalOptions& opt) {
  SampleOutcome out;
  const double half = j.half_chord(opt.delta);
  if (half == 0.0) return out;
  struct Piece {
    Eigen::VectorXd p, q;
  };
  std::vector<Piece> pop{{j.offset - half * j.direction, j.offset + half * j.direction}};
  out.generations = 0;
  try {
    for (int m = 1; m <= opt.m_max; ++m) {
      for (int r = 0; r < opt.n_block; ++r) {
        // Endpoints as columns, mapped through the return path's row operations.
        EndpointTransport ends{Eigen::MatrixXd(sys.dim(), 2 * pop.size())};
        for (std::size_t k = 0; k < pop.size(); ++k) {
          ends.x.col(2 * k) = pop[k].p;
          ends.x.col(2 * k + 1) = pop[k].q;
        }
        auto fr = simplex_first_return(sys, std::move(lambda), opt.escape_cap, false, ends);
        lambda = std::move(fr.lambda);
        std::vector<Piece> next;
        for (std::size_t k = 0; k < pop.size(); ++k) {
          Eigen::VectorXd p = ends.x.col(2 * k), q = ends.x.col(2 * k + 1);
          Eigen::VectorXd d = q - p;
          for (const auto& c : lattice_points_near_segment(p, q, opt.delta)) {
            double lo, hi;
            Eigen::VectorXd cd = c.cast<double>();
            if (!clip_to_ball(p, d, cd, opt.delta, lo, hi)) continue;
            next.push_back({p + lo * d - cd, p + hi * d - cd});
          }
          if (next.size() > opt.population_cap) {
            out.capped = true;
            out.generations = opt.m_max;
            return out;
          }
        }
        pop = std::move(next);
        if (pop.empty()) return out;
      }
      out.generations = m;
    }
  } catch (const CapExceeded&) {
    out.escaped = true;
    out.generations = opt.m_max;
  }
  return out;
}

SurvivalStats survival_probability(const SimplexSystem& sys, const LineSegment& j, const SurvivalOptions& opt) {
  if (!(opt.delta > 0 && opt.delta < 0.1)) throw InputError("delta must lie in (0, 1/10)");
  if (opt.samples < 1 || opt.m_max < 0 || opt.n_block < 1) throw InputError("invalid survival options");
  if (j.direction.size() != sys.dim()) throw InputError("line dimension does not match the system");
  std::vector<SampleOutcome> outcomes(opt.samples);
  auto body = [&](long i) {
    auto rng = rng_stream(opt.seed, static_cast<std::uint64_t>(i));
    outcomes[i] = survival_generations(sys, sample_simplex<Real>(sys, rng), j, opt);
  };
  parallel_samples(opt.samples, opt.workers, body);

  SurvivalStats st;
  st.samples = opt.samples;
  std::vector<std::vector<unsigned char>> ind(opt.samples);
  std::vector<double> grid;
  for (int m = 1; m <= opt.m_max; ++m) grid.push_back(m);
  for (long i = 0; i < opt.samples; ++i) {
    const auto& o = outcomes[i];
    st.capped += o.capped;
    st.escaped += o.escaped;
    st.survival_generations.push_back(o.generations);
    for (int m = 1; m <= opt.m_max; ++m) ind[i].push_back(o.generations >= m ? 1 : 0);
  }
  for (int m = 0; m <= opt.m_max; ++m) {
    SurvivalRow row;
    row.m = m;
    for (const auto& o : outcomes) row.count += o.generations >= m ? 1 : 0;
    row.p_hat = static_cast<double>(row.count) / static_cast<double>(opt.samples);
    row.ci = wilson_interval(row.count, opt.samples);
    st.rows.push_back(row);
  }
  if (!grid.empty()) st.fit = fit_decay(grid, ind, opt.seed);
  return st;
}

std::string to_string(VeechVerdict v) {
  switch (v) {
    case VeechVerdict::candidate: return "eigenvalue-candidate";
    case VeechVerdict::not_candidate: return "not-candidate";
    case VeechVerdict::integer_trivial: return "integer-trivial";
    case VeechVerdict::excluded: return "excluded-ones-not-in-H";
  }
  return "?";
}

}  // namespace iet
