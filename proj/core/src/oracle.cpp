#include "locrank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace locrank::oracle {

namespace {

// Absolute tolerances: identities downstream are tested at 1e-6, so 1-d
// integrals aim three decades below and the nested pair integrals one.
constexpr double kTol1D = 1e-9;
constexpr double kTolPair = 1e-7;
constexpr double kInnerRelTol = 1e-11;
constexpr double kOuterRelTol = 1e-9;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

using boost::math::quadrature::gauss_kronrod;

/// Adaptive Gauss-Kronrod over [a,b], split at the supplied interior cut
/// points so each sub-integral sees a smooth integrand.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& cuts, double abs_tol,
                 const char* what, double rel_tol = kOuterRelTol) {
  if (!(b > a)) return 0.0;
  std::vector<double> knots;
  knots.push_back(a);
  for (double c : cuts)
    if (c > a && c < b) knots.push_back(c);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());

  double total = 0.0;
  double err_total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) continue;
    double err = 0.0;
    total += gauss_kronrod<double, 15>::integrate(f, knots[i], knots[i + 1], 15,
                                                  rel_tol, &err);
    err_total += err;
  }
  if (!(err_total <= abs_tol) || !std::isfinite(total)) {
    std::ostringstream msg;
    msg << "oracle integration of " << what
        << " missed tolerance: achieved " << err_total << ", wanted " << abs_tol;
    throw oracle_error(msg.str());
  }
  return total;
}

std::vector<double> merged_cuts(const std::vector<double>& a,
                                const std::vector<double>& b) {
  std::vector<double> out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> boundary_points(const IntervalList& iv) {
  std::vector<double> out;
  for (const auto& [lo, hi] : iv) {
    out.push_back(lo);
    out.push_back(hi);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// interval lists

namespace {

IntervalList normalize(IntervalList iv) {
  std::sort(iv.begin(), iv.end());
  IntervalList out;
  for (const auto& [lo, hi] : iv) {
    if (!(hi > lo)) continue;
    if (!out.empty() && lo <= out.back().second + 1e-14 * std::abs(out.back().second)) {
      out.back().second = std::max(out.back().second, hi);
    } else if (!out.empty() && lo <= out.back().second) {
      out.back().second = std::max(out.back().second, hi);
    } else {
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

}  // namespace

IntervalList interval_union(const IntervalList& a, const IntervalList& b) {
  IntervalList all(a);
  all.insert(all.end(), b.begin(), b.end());
  return normalize(std::move(all));
}

IntervalList interval_intersection(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  for (const auto& [alo, ahi] : a)
    for (const auto& [blo, bhi] : b) {
      const double lo = std::max(alo, blo);
      const double hi = std::min(ahi, bhi);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  return normalize(std::move(out));
}

IntervalList interval_difference(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  for (const auto& [alo, ahi] : a) {
    double cursor = alo;
    for (const auto& [blo, bhi] : b) {
      if (bhi <= cursor || blo >= ahi) continue;
      if (blo > cursor) out.emplace_back(cursor, std::min(blo, ahi));
      cursor = std::max(cursor, bhi);
      if (cursor >= ahi) break;
    }
    if (cursor < ahi) out.emplace_back(cursor, ahi);
  }
  return normalize(std::move(out));
}

IntervalList interval_symmetric_difference(const IntervalList& a,
                                           const IntervalList& b) {
  return interval_union(interval_difference(a, b), interval_difference(b, a));
}

double interval_total_length(const IntervalList& a) {
  double acc = 0.0;
  for (const auto& [lo, hi] : a) acc += hi - lo;
  return acc;
}

bool interval_contains(const IntervalList& a, double x) {
  for (const auto& [lo, hi] : a)
    if (x >= lo && x <= hi) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Marginal

Marginal Marginal::uniform(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("Marginal: need lo < hi");
  Marginal m;
  m.kind_ = Kind::Uniform;
  m.lo_ = lo;
  m.hi_ = hi;
  return m;
}

Marginal Marginal::gaussian_mixture(double w1, double mean1, double sd1,
                                    double mean2, double sd2, double lo,
                                    double hi) {
  if (!(hi > lo)) throw std::invalid_argument("Marginal: need lo < hi");
  if (!(w1 >= 0.0 && w1 <= 1.0))
    throw std::invalid_argument("Marginal: mixture weight must lie in [0,1]");
  if (!(sd1 > 0.0) || !(sd2 > 0.0))
    throw std::invalid_argument("Marginal: standard deviations must be positive");
  Marginal m;
  m.kind_ = Kind::Mixture;
  m.lo_ = lo;
  m.hi_ = hi;
  m.w1_ = w1;
  m.mean1_ = mean1;
  m.sd1_ = sd1;
  m.mean2_ = mean2;
  m.sd2_ = sd2;
  const double mass1 = normal_cdf((hi - mean1) / sd1) - normal_cdf((lo - mean1) / sd1);
  const double mass2 = normal_cdf((hi - mean2) / sd2) - normal_cdf((lo - mean2) / sd2);
  m.norm_ = w1 * mass1 + (1.0 - w1) * mass2;
  if (!(m.norm_ > 1e-12))
    throw std::invalid_argument("Marginal: mixture has no mass inside [lo,hi]");
  return m;
}

double Marginal::pdf(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  if (kind_ == Kind::Uniform) return 1.0 / (hi_ - lo_);
  const double d1 = normal_pdf((x - mean1_) / sd1_) / sd1_;
  const double d2 = normal_pdf((x - mean2_) / sd2_) / sd2_;
  return (w1_ * d1 + (1.0 - w1_) * d2) / norm_;
}

double Marginal::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  if (kind_ == Kind::Uniform) return (x - lo_) / (hi_ - lo_);
  const double f1 = normal_cdf((x - mean1_) / sd1_) - normal_cdf((lo_ - mean1_) / sd1_);
  const double f2 = normal_cdf((x - mean2_) / sd2_) - normal_cdf((lo_ - mean2_) / sd2_);
  return (w1_ * f1 + (1.0 - w1_) * f2) / norm_;
}

double Marginal::mass(double a, double b) const {
  if (!(b > a)) return 0.0;
  return cdf(b) - cdf(a);
}

double Marginal::sample(RandomStream& rng) const {
  if (kind_ == Kind::Uniform) return lo_ + (hi_ - lo_) * rng.uniform01();
  static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  const double mass1 =
      normal_cdf((hi_ - mean1_) / sd1_) - normal_cdf((lo_ - mean1_) / sd1_);
  const double p1 = w1_ * mass1 / norm_;
  double mean, sd;
  if (rng.uniform01() < p1) {
    mean = mean1_;
    sd = sd1_;
  } else {
    mean = mean2_;
    sd = sd2_;
  }
  const double flo = normal_cdf((lo_ - mean) / sd);
  const double fhi = normal_cdf((hi_ - mean) / sd);
  double u = flo + (fhi - flo) * rng.uniform01();
  u = std::min(std::max(u, 1e-16), 1.0 - 1e-16);
  double x = mean + sd * boost::math::quantile(std_normal, u);
  return std::min(std::max(x, lo_), hi_);
}

std::string Marginal::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::Uniform) {
    os << "uniform(" << lo_ << "," << hi_ << ")";
  } else {
    os << "gauss-mixture(w1=" << w1_ << ",m1=" << mean1_ << ",s1=" << sd1_
       << ",m2=" << mean2_ << ",s2=" << sd2_ << ")|[" << lo_ << "," << hi_ << "]";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Eta

Eta Eta::linear(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("Eta::linear: need lo < hi");
  Eta e;
  e.fn_ = [lo, hi](double x) {
    return std::min(1.0, std::max(0.0, (x - lo) / (hi - lo)));
  };
  e.description_ = "linear";
  return e;
}

Eta Eta::logistic(double a, double b) {
  Eta e;
  e.fn_ = [a, b](double x) {
    const double t = std::min(700.0, std::max(-700.0, a * x + b));
    return 1.0 / (1.0 + std::exp(-t));
  };
  std::ostringstream os;
  os << "logistic(" << a << "," << b << ")";
  e.description_ = os.str();
  return e;
}

Eta Eta::step_smooth(double q, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("Eta::step_smooth: need w > 0");
  Eta e;
  const double left = q - 0.5 * w;
  e.fn_ = [left, w](double x) {
    const double t = std::min(1.0, std::max(0.0, (x - left) / w));
    return t * t * (3.0 - 2.0 * t);  // flat 0 below, flat 1 above the ramp
  };
  e.cuts_ = {left, left + w};
  std::ostringstream os;
  os << "step-smooth(" << q << "," << w << ")";
  e.description_ = os.str();
  return e;
}

Eta Eta::constant(double c) {
  if (!(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("Eta::constant: need c in [0,1]");
  Eta e;
  e.fn_ = [c](double) { return c; };
  std::ostringstream os;
  os << "constant(" << c << ")";
  e.description_ = os.str();
  return e;
}

// ---------------------------------------------------------------------------
// SyntheticModel

SyntheticModel::SyntheticModel(Marginal marginal, Eta eta,
                               std::optional<double> noise_exponent_alpha)
    : marginal_(std::move(marginal)), eta_(std::move(eta)),
      noise_alpha_(noise_exponent_alpha) {
  if (noise_alpha_ && !(*noise_alpha_ > 0.0 && *noise_alpha_ < 1.0))
    throw std::invalid_argument("SyntheticModel: noise exponent must lie in (0,1)");
  p_ = pos_mass(marginal_.lo(), marginal_.hi());
  if (p_ < 0.0) p_ = 0.0;
  if (p_ > 1.0) p_ = 1.0;
}

Dataset SyntheticModel::sample(std::size_t n, RandomStream& rng) const {
  if (n == 0) throw std::invalid_argument("SyntheticModel::sample: need n >= 1");
  std::vector<double> xs(n);
  std::vector<int> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = marginal_.sample(rng);
    ys[i] = rng.bernoulli(eta_(xs[i])) ? 1 : -1;
  }
  return Dataset(n, 1, std::move(xs), std::move(ys));
}

double SyntheticModel::pos_mass(double a, double b) const {
  a = std::max(a, marginal_.lo());
  b = std::min(b, marginal_.hi());
  if (!(b > a)) return 0.0;
  const auto f = [this](double x) { return eta_(x) * marginal_.pdf(x); };
  return integrate(f, a, b, eta_.cuts(), kTol1D, "pos_mass", kInnerRelTol);
}

double SyntheticModel::neg_mass(double a, double b) const {
  a = std::max(a, marginal_.lo());
  b = std::min(b, marginal_.hi());
  if (!(b > a)) return 0.0;
  return marginal_.mass(a, b) - pos_mass(a, b);
}

double SyntheticModel::pos_mass(const IntervalList& iv) const {
  double acc = 0.0;
  for (const auto& [lo, hi] : iv) acc += pos_mass(lo, hi);
  return acc;
}

double SyntheticModel::neg_mass(const IntervalList& iv) const {
  double acc = 0.0;
  for (const auto& [lo, hi] : iv) acc += neg_mass(lo, hi);
  return acc;
}

std::string SyntheticModel::describe() const {
  std::ostringstream os;
  os << marginal_.describe() << " / eta=" << eta_.describe();
  return os.str();
}

// ---------------------------------------------------------------------------
// Score1D

namespace {

void collect_cuts(const ScoringModel& model, std::vector<double>& out) {
  if (model.is_piecewise_linear()) {
    const auto& pwl = model.as_piecewise_linear();
    out.insert(out.end(), pwl.breakpoints.begin(), pwl.breakpoints.end());
    return;
  }
  if (const auto* c = model.as_custom1d()) {
    out.insert(out.end(), c->cuts.begin(), c->cuts.end());
    return;
  }
  if (const auto* m = model.as_member()) {
    collect_cuts(m->family->at(m->index), out);
    return;
  }
  // linear in 1-d: monotone everywhere, no cuts
}

}  // namespace

Score1D::Score1D(const ScoringModel& model, const Marginal& domain) {
  if (model.dimension() != 1)
    throw std::invalid_argument("Score1D: scorer must be 1-d");
  fn_ = [model](double x) { return model.evaluate1d(x); };

  std::vector<double> cuts;
  collect_cuts(model, cuts);
  cut_points_.push_back(domain.lo());
  for (double c : cuts)
    if (c > domain.lo() && c < domain.hi()) cut_points_.push_back(c);
  cut_points_.push_back(domain.hi());
  std::sort(cut_points_.begin(), cut_points_.end());
  cut_points_.erase(std::unique(cut_points_.begin(), cut_points_.end()),
                    cut_points_.end());

  min_value_ = std::numeric_limits<double>::infinity();
  max_value_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < cut_points_.size(); ++i) {
    Piece piece;
    piece.lo = cut_points_[i];
    piece.hi = cut_points_[i + 1];
    const bool last = (i + 2 == cut_points_.size());
    // stay just inside the half-open piece so jumps at the cut belong to
    // the neighbour
    const double hi_inside = last ? piece.hi : std::nextafter(piece.hi, piece.lo);
    piece.v_lo = fn_(piece.lo);
    piece.v_hi = fn_(hi_inside);
    const double v_mid = fn_(0.5 * (piece.lo + piece.hi));
    const double scale =
        std::max({1.0, std::abs(piece.v_lo), std::abs(piece.v_hi)});
    if (piece.v_hi > piece.v_lo)
      piece.dir = +1;
    else if (piece.v_hi < piece.v_lo)
      piece.dir = -1;
    else
      piece.dir = 0;
    const bool mid_ok =
        piece.dir != 0
            ? ((v_mid - piece.v_lo) * piece.dir >= -1e-9 * scale &&
               (piece.v_hi - v_mid) * piece.dir >= -1e-9 * scale)
            : std::abs(v_mid - piece.v_lo) <= 1e-9 * scale;
    if (!mid_ok)
      throw oracle_error(
          "Score1D: scorer is not monotone between declared cuts; add the "
          "missing cut points");
    min_value_ = std::min({min_value_, piece.v_lo, piece.v_hi});
    max_value_ = std::max({max_value_, piece.v_lo, piece.v_hi});
    pieces_.push_back(piece);
  }
}

double Score1D::root_in_piece(const Piece& piece, double z) const {
  // monotone bisection for f(x) = z inside the piece
  double a = piece.lo;
  double b = piece.hi;
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double v = fn_(mid);
    const bool left = (piece.dir > 0) ? (v < z) : (v > z);
    if (left)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

IntervalList Score1D::preimage(double z, Rel rel) const {
  IntervalList out;
  const bool upper = (rel == Rel::GE || rel == Rel::GT);
  for (const auto& piece : pieces_) {
    if (piece.dir == 0) {
      const double c = piece.v_lo;
      bool keep = false;
      switch (rel) {
        case Rel::LE: keep = c <= z; break;
        case Rel::LT: keep = c < z; break;
        case Rel::GE: keep = c >= z; break;
        case Rel::GT: keep = c > z; break;
      }
      if (keep) out.emplace_back(piece.lo, piece.hi);
      continue;
    }
    const double vmin = std::min(piece.v_lo, piece.v_hi);
    const double vmax = std::max(piece.v_lo, piece.v_hi);
    const bool keep_low = !upper;  // {s <= z} keeps the low-value side
    if (z >= vmax) {
      if (keep_low) out.emplace_back(piece.lo, piece.hi);
      continue;
    }
    if (z < vmin) {
      if (!keep_low) out.emplace_back(piece.lo, piece.hi);
      continue;
    }
    const double r = root_in_piece(piece, z);
    const bool low_side_left = piece.dir > 0;
    if (keep_low == low_side_left)
      out.emplace_back(piece.lo, r);
    else
      out.emplace_back(r, piece.hi);
  }
  std::sort(out.begin(), out.end());
  // merge abutting intervals (root noise leaves ~1e-15 gaps)
  IntervalList merged;
  for (const auto& [lo, hi] : out) {
    if (!(hi > lo)) continue;
    if (!merged.empty() && lo <= merged.back().second + 1e-12)
      merged.back().second = std::max(merged.back().second, hi);
    else
      merged.emplace_back(lo, hi);
  }
  return merged;
}

// ---------------------------------------------------------------------------
// population quantities

double score_cdf(const SyntheticModel& model, const Score1D& s, double z) {
  double acc = 0.0;
  for (const auto& [lo, hi] : s.preimage(z, Score1D::Rel::LE))
    acc += model.marginal().mass(lo, hi);
  return acc;
}

double score_cdf_pos(const SyntheticModel& model, const Score1D& s, double z) {
  return model.pos_mass(s.preimage(z, Score1D::Rel::LE)) / model.p();
}

double score_cdf_neg(const SyntheticModel& model, const Score1D& s, double z) {
  return model.neg_mass(s.preimage(z, Score1D::Rel::LE)) / (1.0 - model.p());
}

namespace {

double quantile_of(const SyntheticModel& model, const Score1D& s, double v) {
  if (!(v > 0.0 && v < 1.0))
    throw std::invalid_argument("true_quantile: v must lie in (0,1)");
  double lo = s.min_value();
  double hi = s.max_value();
  if (score_cdf(model, s, lo) >= v) return lo;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (score_cdf(model, s, mid) >= v)
      hi = mid;
    else
      lo = mid;
  }
  return hi;  // inf{z : F(z) >= v}
}

void require_two_classes(const SyntheticModel& model) {
  if (!(model.p() > 0.0 && model.p() < 1.0))
    throw oracle_error("population conditional quantities need 0 < p < 1");
}

}  // namespace

double true_quantile(const SyntheticModel& model, const ScoringModel& s, double v) {
  Score1D score(s, model.marginal());
  return quantile_of(model, score, v);
}

PopulationPoint population_point(const SyntheticModel& model,
                                 const ScoringModel& s, double v) {
  Score1D score(s, model.marginal());
  const auto k_at = [&](double level) {
    const double q = quantile_of(model, score, level);
    const auto below = score.preimage(q, Score1D::Rel::LE);
    return model.pos_mass(below) - model.neg_mass(below);
  };
  PopulationPoint out;
  if (v == 1.0) {
    // endpoint: Q(s,1) is the top of the score range, K(s,1) = 2p - 1,
    // and the derivative falls back to a one-sided difference
    out.q = score.max_value();
    const auto below = score.preimage(out.q, Score1D::Rel::LE);
    out.k = model.pos_mass(below) - model.neg_mass(below);
    const double h = 1e-4;
    out.k_prime = (out.k - k_at(1.0 - h)) / h;
    return out;
  }
  out.q = quantile_of(model, score, v);
  {
    const auto below = score.preimage(out.q, Score1D::Rel::LE);
    out.k = model.pos_mass(below) - model.neg_mass(below);
  }
  // centered finite difference; K is smooth in v for the supported models
  const double h = 1e-4;
  const double v_lo = std::max(1e-6, v - h);
  const double v_hi = std::min(1.0 - 1e-6, v + h);
  out.k_prime = (k_at(v_hi) - k_at(v_lo)) / (v_hi - v_lo);
  return out;
}

namespace {

struct ReportContext {
  const SyntheticModel& model;
  Score1D score;
  double q = 0.0;
  IntervalList top;         // {s >= q}
  IntervalList above;       // {s > q}
  IntervalList below;       // {s < q}
  double p = 0.0;

  ReportContext(const SyntheticModel& m, const ScoringModel& s, double v0)
      : model(m), score(s, m.marginal()) {
    q = quantile_of(m, score, v0);
    top = score.preimage(q, Score1D::Rel::GE);
    above = score.preimage(q, Score1D::Rel::GT);
    below = score.preimage(q, Score1D::Rel::LT);
    p = m.p();
  }

  std::vector<double> outer_cuts() const {
    return merged_cuts(score.cut_points(), boundary_points(top));
  }
};

}  // namespace

TrueQuantities true_report(const SyntheticModel& model, const ScoringModel& s,
                           Rate u0) {
  require_two_classes(model);
  if (u0.is_global())
    throw std::invalid_argument("true_report: use a strict rate (the global "
                                "flag has no population quantile)");
  ReportContext ctx(model, s, u0.v0());
  const double p = ctx.p;
  const auto& mu = model.marginal();

  TrueQuantities out;
  out.q = ctx.q;
  double top_mass = 0.0;
  for (const auto& [lo, hi] : ctx.top) top_mass += mu.mass(lo, hi);
  out.degenerate_quantile = std::abs(top_mass - u0.u0()) > 1e-7;
  out.alpha = model.neg_mass(ctx.top) / (1.0 - p);
  out.beta = model.pos_mass(ctx.top) / p;
  out.l = model.pos_mass(ctx.below) + model.neg_mass(ctx.above);

  // K and K' at v0
  const auto pop = population_point(model, s, u0.v0());
  out.k = pop.k;
  out.k_prime = pop.k_prime;

  // LocAUC = int_q^inf H_s dG_s = E[eta(X) H_s(s(X)) ; s(X) >= q] / p
  const auto h_of = [&](double z) {
    return model.neg_mass(ctx.score.preimage(z, Score1D::Rel::LE)) / (1.0 - p);
  };
  {
    double acc = 0.0;
    const auto cuts = ctx.outer_cuts();
    for (const auto& [lo, hi] : ctx.top) {
      const auto f = [&](double x) {
        return model.eta(x) * h_of(ctx.score(x)) * mu.pdf(x);
      };
      acc += integrate(f, lo, hi, cuts, kTolPair, "locauc (H dG route)");
    }
    out.locauc = acc / p;
  }

  // W = int_{F_s(s) > v0} F_s(s(x)) eta(x) dmu / p
  {
    double acc = 0.0;
    const auto cuts = ctx.outer_cuts();
    for (const auto& [lo, hi] : ctx.above) {
      const auto f = [&](double x) {
        return score_cdf(model, ctx.score, ctx.score(x)) * model.eta(x) * mu.pdf(x);
      };
      acc += integrate(f, lo, hi, cuts, kTolPair, "W (F dG route)");
    }
    out.w = acc / p;
  }

  // R(s,u0): pair double integral, discordant pairs inside the top set
  {
    double acc = 0.0;
    const auto cuts = ctx.outer_cuts();
    for (const auto& [lo, hi] : ctx.top) {
      const auto f = [&](double xp) {
        const auto harder = ctx.score.preimage(ctx.score(xp), Score1D::Rel::GT);
        return model.eta(xp) * model.neg_mass(harder) * mu.pdf(xp);
      };
      acc += integrate(f, lo, hi, cuts, kTolPair, "R (pair double integral)");
    }
    out.r_local = 2.0 * acc;
  }

  out.m = out.r_local + (1.0 - p) * out.l;
  return out;
}

double locauc_via_pairs(const SyntheticModel& model, const ScoringModel& s,
                        Rate u0) {
  require_two_classes(model);
  if (u0.is_global())
    throw std::invalid_argument("locauc_via_pairs: use a strict rate");
  ReportContext ctx(model, s, u0.v0());
  const double p = ctx.p;
  const auto& mu = model.marginal();
  const double top_pos = model.pos_mass(ctx.top);  // p * beta

  // integrate over the NEGATIVE member x': the positive must beat
  // max(s(x'), q)
  const auto cuts = ctx.outer_cuts();
  const auto f = [&](double xn) {
    const double sx = ctx.score(xn);
    double winners;
    if (sx >= ctx.q)
      winners = model.pos_mass(ctx.score.preimage(sx, Score1D::Rel::GT));
    else
      winners = top_pos;
    return (1.0 - model.eta(xn)) * winners * mu.pdf(xn);
  };
  const double acc = integrate(f, mu.lo(), mu.hi(), cuts, kTolPair,
                               "locauc (pair route)");
  return acc / (p * (1.0 - p));
}

double trunc_auc_population(const SyntheticModel& model, const ScoringModel& s,
                            Rate u0) {
  require_two_classes(model);
  if (u0.is_global())
    throw std::invalid_argument("trunc_auc_population: use a strict rate");
  ReportContext ctx(model, s, u0.v0());
  const double p = ctx.p;
  const auto& mu = model.marginal();

  // P(positive outscores negative, both in the top set) / (p(1-p))
  const auto cuts = ctx.outer_cuts();
  double acc = 0.0;
  for (const auto& [lo, hi] : ctx.top) {
    const auto f = [&](double xn) {
      const double winners =
          model.pos_mass(ctx.score.preimage(ctx.score(xn), Score1D::Rel::GT));
      return (1.0 - model.eta(xn)) * winners * mu.pdf(xn);
    };
    acc += integrate(f, lo, hi, cuts, kTolPair, "truncated AUC (pair route)");
  }
  return acc / (p * (1.0 - p));
}

BayesReport bayes_report(const SyntheticModel& model, Rate u0, double tolerance) {
  require_two_classes(model);
  if (u0.is_global())
    throw std::invalid_argument("bayes_report: use a strict rate");
  const auto& mu = model.marginal();
  ScoringModel eta_score = ScoringModel::custom1d(
      [&model](double x) { return model.eta(x); }, model.eta_spec().cuts(), "eta");
  Score1D score(eta_score, mu);

  BayesReport out;
  out.q_eta = quantile_of(model, score, u0.v0());
  out.c_star = score.preimage(out.q_eta, Score1D::Rel::GE);

  double cstar_mass = 0.0;
  for (const auto& [lo, hi] : out.c_star) cstar_mass += mu.mass(lo, hi);
  out.degenerate = std::abs(cstar_mass - u0.u0()) > 1e-7;

  // closed form of Prop-style optimal risk
  const double q = out.q_eta;
  const auto cuts = merged_cuts(score.cut_points(), boundary_points(out.c_star));
  const auto abs_dev = [&](double x) {
    return std::abs(model.eta(x) - q) * mu.pdf(x);
  };
  const double e_abs =
      integrate(abs_dev, mu.lo(), mu.hi(), cuts, kTol1D, "E|eta - q|");
  out.l_star = 1.0 - q + (1.0 - u0.u0()) * (2.0 * q - 1.0) - e_abs;

  // direct route: error of the plug-in classifier g* built from eta
  const auto below = score.preimage(q, Score1D::Rel::LT);
  const auto above = score.preimage(q, Score1D::Rel::GT);
  out.l_star_direct = model.pos_mass(below) + model.neg_mass(above);

  out.difference = std::abs(out.l_star - out.l_star_direct);
  if (!out.degenerate && out.difference > tolerance) {
    std::ostringstream msg;
    msg << "bayes_report: L* routes disagree by " << out.difference
        << " (tolerance " << tolerance << ")";
    throw oracle_error(msg.str());
  }
  return out;
}

double excess_risk(const SyntheticModel& model, const ScoringModel& s, Rate u0,
                   double tolerance, double* via_delta_out, double* via_risk_out) {
  const auto bayes = bayes_report(model, u0, tolerance);
  const auto report = true_report(model, s, u0);
  const double via_risk = report.l - bayes.l_star;

  Score1D score(s, model.marginal());
  const auto c_s = score.preimage(
      quantile_of(model, score, u0.v0()), Score1D::Rel::GE);
  const auto delta = interval_symmetric_difference(bayes.c_star, c_s);
  const auto& mu = model.marginal();
  double via_delta = 0.0;
  for (const auto& [lo, hi] : delta) {
    const auto f = [&](double x) {
      return std::abs(model.eta(x) - bayes.q_eta) * mu.pdf(x);
    };
    via_delta += integrate(f, lo, hi, model.eta_spec().cuts(), kTol1D,
                           "excess risk (symmetric difference)");
  }
  via_delta *= 2.0;
  if (via_delta_out) *via_delta_out = via_delta;
  if (via_risk_out) *via_risk_out = via_risk;

  if (std::abs(via_delta - via_risk) > tolerance) {
    std::ostringstream msg;
    msg << "excess_risk: routes disagree: symmetric-difference "
        << via_delta << " vs risk-gap " << via_risk;
    throw oracle_error(msg.str());
  }
  return via_risk;
}

ScoringModel optimal_scoring(const SyntheticModel& model, Rate u0) {
  const auto bayes = bayes_report(model, u0);
  const double floor_value = bayes.q_eta - 1.0;
  const auto c_star = bayes.c_star;
  // evaluator: eta on C*, a constant strictly below inf_{C*} eta elsewhere
  auto fn = [&model, c_star, floor_value](double x) {
    return interval_contains(c_star, x) ? model.eta(x) : floor_value;
  };
  auto cuts = merged_cuts(model.eta_spec().cuts(), boundary_points(c_star));
  return ScoringModel::custom1d(std::move(fn), std::move(cuts), "s_star");
}

double w_constant(double p, double u0) {
  if (!(p > 0.0 && p < 1.0) || !(u0 > 0.0 && u0 < 1.0))
    throw std::invalid_argument("w_constant: p and u0 must lie in (0,1)");
  const double a = p + u0;
  return a - 0.25 * a * a;
}

}  // namespace locrank::oracle
