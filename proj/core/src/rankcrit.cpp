#include "locrank/rankcrit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "locrank/classify.hpp"
#include "locrank/edf.hpp"

namespace locrank {

namespace {

struct LabelCounts {
  std::size_t pos = 0, neg = 0;
};

LabelCounts count_labels(std::span<const int> labels) {
  LabelCounts c;
  for (int y : labels) {
    if (y == 1)
      ++c.pos;
    else if (y == -1)
      ++c.neg;
    else
      throw std::invalid_argument("labels must be -1 or +1");
  }
  return c;
}

void require_two_classes(const LabelCounts& c) {
  if (c.pos == 0 || c.neg == 0)
    throw std::invalid_argument(
        "pair statistics need both classes present (n+ >= 1 and n- >= 1)");
}

std::vector<std::size_t> sorted_order(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return idx;
}

/// Single ascending sweep over tie groups. Counts integerly: global
/// concordant pairs, pairs qualifying for LocAUC (positive at or above the
/// threshold), and concordant/tied pairs within the top subsample.
struct SweepCounts {
  std::uint64_t concordant = 0;
  std::uint64_t tied = 0;
  std::uint64_t locauc_pairs = 0;
  std::uint64_t pos_top = 0, neg_top = 0;
  std::uint64_t concordant_top = 0, tied_top = 0;
};

SweepCounts sweep(std::span<const double> scores, std::span<const int> labels,
                  bool thresholded, double q_hat) {
  const auto idx = sorted_order(scores);
  SweepCounts out;
  std::uint64_t neg_below = 0;
  std::uint64_t neg_below_top = 0;
  std::size_t i = 0;
  const std::size_t n = idx.size();
  while (i < n) {
    std::size_t j = i;
    std::uint64_t gpos = 0, gneg = 0;
    const double s = scores[idx[i]];
    while (j < n && scores[idx[j]] == s) {
      if (labels[idx[j]] == 1)
        ++gpos;
      else
        ++gneg;
      ++j;
    }
    const bool in_top = !thresholded || s >= q_hat;
    out.concordant += gpos * neg_below;
    out.tied += gpos * gneg;
    if (in_top) {
      out.locauc_pairs += gpos * neg_below;
      out.concordant_top += gpos * neg_below_top;
      out.tied_top += gpos * gneg;
      out.pos_top += gpos;
      out.neg_top += gneg;
      neg_below_top += gneg;
    }
    neg_below += gneg;
    i = j;
  }
  return out;
}

double threshold_for(std::span<const double> scores, Rate u0) {
  EmpiricalDistribution dist(std::vector<double>(scores.begin(), scores.end()));
  if (u0.is_global()) return dist.min();
  return dist.quantile(u0.v0());
}

void append_number(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += '"';
  out += key;
  out += "\":";
  out += buf;
}

}  // namespace

PairCounts pair_counts(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores/labels size mismatch");
  const auto c = count_labels(labels);
  require_two_classes(c);
  const auto sw = sweep(scores, labels, false, 0.0);
  return PairCounts{sw.concordant, sw.tied, c.pos, c.neg};
}

double hat_auc(std::span<const double> scores, std::span<const int> labels) {
  const auto pc = pair_counts(scores, labels);
  return static_cast<double>(pc.concordant) /
         (static_cast<double>(pc.pos) * static_cast<double>(pc.neg));
}

std::vector<RocPoint> roc_points(std::span<const double> scores,
                                 std::span<const int> labels,
                                 std::span<const double> u_grid) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores/labels size mismatch");
  const auto c = count_labels(labels);
  require_two_classes(c);
  EmpiricalDistribution dist(std::vector<double>(scores.begin(), scores.end()));
  const auto& sorted = dist.sorted();
  // positives among sorted suffixes, one pass
  std::vector<std::size_t> order = sorted_order(scores);
  std::vector<std::uint64_t> pos_suffix(order.size() + 1, 0);
  for (std::size_t i = order.size(); i-- > 0;)
    pos_suffix[i] = pos_suffix[i + 1] + (labels[order[i]] == 1 ? 1 : 0);

  std::vector<RocPoint> out;
  out.reserve(u_grid.size());
  for (double u : u_grid) {
    Rate rate(u);  // validates u in (0,1)
    const double q = dist.quantile(rate.v0());
    const std::size_t first_ge = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), q) - sorted.begin());
    const std::uint64_t pos_ge = pos_suffix[first_ge];
    const std::uint64_t total_ge = sorted.size() - first_ge;
    const std::uint64_t neg_ge = total_ge - pos_ge;
    RocPoint pt;
    pt.u = u;
    pt.alpha_hat = static_cast<double>(neg_ge) / static_cast<double>(c.neg);
    pt.beta_hat = static_cast<double>(pos_ge) / static_cast<double>(c.pos);
    out.push_back(pt);
  }
  return out;
}

double hat_locauc(std::span<const double> scores, std::span<const int> labels,
                  Rate u0) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores/labels size mismatch");
  const auto c = count_labels(labels);
  require_two_classes(c);
  const double q = threshold_for(scores, u0);
  const auto sw = sweep(scores, labels, !u0.is_global(), q);
  return static_cast<double>(sw.locauc_pairs) /
         (static_cast<double>(c.pos) * static_cast<double>(c.neg));
}

double trunc_auc(std::span<const double> scores, std::span<const int> labels,
                 Rate u0) {
  const auto report = full_report(scores, labels, u0);
  return report.trunc_auc_hat;
}

double hat_R_local(std::span<const double> scores, std::span<const int> labels,
                   Rate u0) {
  if (scores.size() < 2)
    throw std::invalid_argument("hat_R_local needs n >= 2");
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores/labels size mismatch");
  count_labels(labels);  // validates label values
  const double q = threshold_for(scores, u0);
  const auto sw = sweep(scores, labels, !u0.is_global(), q);
  const std::uint64_t cross = sw.pos_top * sw.neg_top;
  const std::uint64_t discordant_unordered = cross - sw.concordant_top - sw.tied_top;
  const double n = static_cast<double>(scores.size());
  return 2.0 * static_cast<double>(discordant_unordered) / (n * (n - 1.0));
}

std::uint64_t positive_rank_sum(std::span<const double> scores,
                                std::span<const int> labels) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("bad sample");
  count_labels(labels);
  const auto idx = sorted_order(scores);
  std::uint64_t acc = 0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (r > 0 && scores[idx[r]] == scores[idx[r - 1]])
      throw std::invalid_argument(
          "rank statistics need distinct scores (no mid-rank convention)");
    if (labels[idx[r]] == 1) acc += r + 1;
  }
  return acc;
}

double t_wilcoxon(std::span<const double> scores, std::span<const int> labels) {
  const double n1 = static_cast<double>(scores.size()) + 1.0;
  return static_cast<double>(positive_rank_sum(scores, labels)) / n1;
}

double t_local(std::span<const double> scores, std::span<const int> labels,
               Rate u0) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("bad sample");
  count_labels(labels);
  const double threshold = u0.is_global() ? 0.0 : 1.0 - u0.u0();
  const auto idx = sorted_order(scores);
  const double n1 = static_cast<double>(scores.size()) + 1.0;
  double acc = 0.0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (r > 0 && scores[idx[r]] == scores[idx[r - 1]])
      throw std::invalid_argument(
          "rank statistics need distinct scores (no mid-rank convention)");
    if (labels[idx[r]] != 1) continue;
    const double v = static_cast<double>(r + 1) / n1;
    if (v > threshold) acc += v;
  }
  return acc;
}

double hat_M(std::span<const double> scores, std::span<const int> labels,
             Rate u0) {
  const auto report = full_report(scores, labels, u0);
  return report.m_hat;
}

CriterionReport full_report(std::span<const double> scores,
                            std::span<const int> labels, Rate u0) {
  if (scores.size() < 2)
    throw std::invalid_argument("full_report needs n >= 2");
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores/labels size mismatch");
  const auto c = count_labels(labels);
  require_two_classes(c);

  CriterionReport rep;
  rep.global = u0.is_global();
  rep.u0 = rep.global ? 1.0 : u0.u0();

  const double n = static_cast<double>(scores.size());
  rep.p_hat = static_cast<double>(c.pos) / n;
  rep.q_hat = threshold_for(scores, u0);

  const auto sw = sweep(scores, labels, !u0.is_global(), rep.q_hat);
  const double pairs = static_cast<double>(c.pos) * static_cast<double>(c.neg);
  rep.auc_hat = static_cast<double>(sw.concordant) / pairs;
  rep.locauc_hat = static_cast<double>(sw.locauc_pairs) / pairs;
  rep.alpha_hat = static_cast<double>(sw.neg_top) / static_cast<double>(c.neg);
  rep.beta_hat = static_cast<double>(sw.pos_top) / static_cast<double>(c.pos);
  rep.trunc_auc_hat =
      rep.locauc_hat - rep.beta_hat + rep.alpha_hat * rep.beta_hat;

  const std::uint64_t discordant_unordered =
      sw.pos_top * sw.neg_top - sw.concordant_top - sw.tied_top;
  rep.r_local_hat = 2.0 * static_cast<double>(discordant_unordered) / (n * (n - 1.0));

  // error indicator with the same threshold (strict <, so the quantile
  // point itself never errs)
  std::size_t errors = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (static_cast<double>(labels[i]) * (scores[i] - rep.q_hat) < 0.0) ++errors;
  rep.l_hat = static_cast<double>(errors) / n;

  rep.m_hat = rep.r_local_hat + (static_cast<double>(c.neg) / n) * rep.l_hat;

  bool distinct = true;
  {
    std::vector<double> s(scores.begin(), scores.end());
    std::sort(s.begin(), s.end());
    distinct = std::adjacent_find(s.begin(), s.end()) == s.end();
  }
  if (distinct) {
    rep.t_wilcoxon = t_wilcoxon(scores, labels);
    rep.t_local = t_local(scores, labels, u0);
    rep.w_hat = *rep.t_local / static_cast<double>(c.pos);
  }
  return rep;
}

std::string CriterionReport::to_json() const {
  std::string out = "{";
  if (global)
    out += "\"u0\":\"global\",";
  else {
    append_number(out, "u0", u0);
    out += ',';
  }
  append_number(out, "q_hat", q_hat); out += ',';
  append_number(out, "l_hat", l_hat); out += ',';
  append_number(out, "auc_hat", auc_hat); out += ',';
  append_number(out, "locauc_hat", locauc_hat); out += ',';
  append_number(out, "trunc_auc_hat", trunc_auc_hat); out += ',';
  append_number(out, "r_local_hat", r_local_hat); out += ',';
  if (t_wilcoxon) { append_number(out, "t_wilcoxon", *t_wilcoxon); out += ','; }
  if (t_local) { append_number(out, "t_local", *t_local); out += ','; }
  if (w_hat) { append_number(out, "w_hat", *w_hat); out += ','; }
  append_number(out, "m_hat", m_hat); out += ',';
  append_number(out, "alpha_hat", alpha_hat); out += ',';
  append_number(out, "beta_hat", beta_hat); out += ',';
  append_number(out, "p_hat", p_hat);
  out += '}';
  return out;
}

std::string roc_csv(const std::vector<RocPoint>& points, double p_hat) {
  std::string out = "u,alpha,beta,d_line\n";
  char buf[160];
  for (const auto& pt : points) {
    const double d = p_hat * pt.beta_hat + (1.0 - p_hat) * pt.alpha_hat;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", pt.u,
                  pt.alpha_hat, pt.beta_hat, d);
    out += buf;
  }
  return out;
}

}  // namespace locrank
