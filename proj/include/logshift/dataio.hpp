// CSV ingestion and preprocessing: log returns, rank-based marginal
// Gaussianization, sample covariances (1/n convention), train/holdout splits,
// and atomic CSV output.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "logshift/objective.hpp"
#include "logshift/rng.hpp"

namespace logshift {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// K groups of observations (rows) over one shared ordered variable list.
struct ObservationSet {
  std::vector<Matrix> groups;
  std::vector<std::string> names;

  int K() const { return static_cast<int>(groups.size()); }
  Index p() const { return static_cast<Index>(names.size()); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

inline double parse_cell(const std::string& cell, const std::string& file,
                         size_t line, size_t col) {
  const auto where = [&] {
    return file + ":" + std::to_string(line) + " column " + std::to_string(col);
  };
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw ParseError("non-numeric cell '" + cell + "' at " + where());
  if (!std::isfinite(value))
    throw ParseError("non-finite cell '" + cell + "' at " + where());
  return value;
}

}  // namespace detail

// One file per group; rows are observations, columns are variables. Header
// rows supply variable names (which must agree across groups); without a
// header the names are V1..Vp.
inline ObservationSet load_csv(const std::vector<std::string>& paths,
                               bool has_header) {
  if (paths.empty()) throw std::invalid_argument("load_csv: no input files");
  ObservationSet obs;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
      const auto fields = detail::split_fields(line);
      if (lineno == 1 && has_header) {
        names = fields;
        continue;
      }
      std::vector<double> row;
      row.reserve(fields.size());
      for (size_t c = 0; c < fields.size(); ++c)
        row.push_back(detail::parse_cell(fields[c], path, lineno, c + 1));
      if (!rows.empty() && row.size() != rows.front().size())
        throw ParseError("ragged row at " + path + ":" + std::to_string(lineno) +
                         " (" + std::to_string(row.size()) + " fields, expected " +
                         std::to_string(rows.front().size()) + ")");
      rows.push_back(std::move(row));
    }
    if (rows.size() < 2)
      throw ParseError(path + ": need at least 2 observation rows");
    const size_t p = rows.front().size();
    if (has_header && names.size() != p)
      throw ParseError(path + ": header has " + std::to_string(names.size()) +
                       " names for " + std::to_string(p) + " columns");
    if (!has_header) {
      names.clear();
      for (size_t j = 1; j <= p; ++j) names.push_back("V" + std::to_string(j));
    }
    if (obs.names.empty()) {
      obs.names = names;
    } else {
      if (names.size() != obs.names.size())
        throw ParseError(path + ": column count disagrees with first group");
      if (names != obs.names)
        throw ParseError(path + ": variable names disagree with first group");
    }
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(p));
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < p; ++j)
        m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    obs.groups.push_back(std::move(m));
  }
  return obs;
}

// Row i of the output is log(prices[i+1] / prices[i]), elementwise.
inline Matrix log_returns(const Matrix& prices) {
  if (prices.rows() < 2)
    throw std::invalid_argument("log_returns: need at least 2 rows");
  for (Index i = 0; i < prices.rows(); ++i)
    for (Index j = 0; j < prices.cols(); ++j)
      if (!(prices(i, j) > 0.0))
        throw std::domain_error("log_returns: nonpositive price at row " +
                                std::to_string(i + 1) + " column " +
                                std::to_string(j + 1));
  Matrix out(prices.rows() - 1, prices.cols());
  for (Index i = 0; i + 1 < prices.rows(); ++i)
    out.row(i) = (prices.row(i + 1).array() / prices.row(i).array()).log();
  return out;
}

// Acklam's rational approximation with one Halley refinement step.
inline double norm_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::domain_error("norm_quantile: p must be in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (prob < p_low) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - p_low) {
    const double q = prob - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Per-column normal scores: value -> Phi^{-1}((rank - 0.5) / n), ranks from 1
// with ties assigned their average rank.
inline Matrix gaussianize(const Matrix& x) {
  const Index n = x.rows(), p = x.cols();
  if (n < 2) throw std::invalid_argument("gaussianize: need at least 2 rows");
  Matrix out(n, p);
  std::vector<Index> order(static_cast<size_t>(n));
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](Index u, Index v) { return x(u, j) < x(v, j); });
    Index i = 0;
    while (i < n) {
      Index run_end = i;
      while (run_end + 1 < n && x(order[run_end + 1], j) == x(order[i], j))
        ++run_end;
      const double avg_rank = 0.5 * static_cast<double>(i + run_end) + 1.0;
      const double score = norm_quantile((avg_rank - 0.5) / static_cast<double>(n));
      for (Index r = i; r <= run_end; ++r) out(order[r], j) = score;
      i = run_end + 1;
    }
  }
  return out;
}

// S^(k) = (1/n_k) sum_i (x_i - xbar)(x_i - xbar)^T, the MLE convention.
inline CovarianceSet sample_covariance(const ObservationSet& obs) {
  std::vector<SymMatrix> S;
  std::vector<double> n;
  for (const auto& g : obs.groups) {
    if (g.rows() < 2)
      throw std::invalid_argument("sample_covariance: need n_k >= 2");
    const Matrix centered = g.rowwise() - g.colwise().mean();
    S.push_back(SymMatrix::from_lower(centered.transpose() * centered /
                                      static_cast<double>(g.rows())));
    n.push_back(static_cast<double>(g.rows()));
  }
  return CovarianceSet::make(std::move(S), std::move(n));
}

// Per-group uniform row partition without replacement; the train side gets
// round(train_frac * n_k) rows, with at least 2 rows on each side. Row order
// within each part follows the original data.
inline std::pair<ObservationSet, ObservationSet> split(
    const ObservationSet& obs, double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw std::invalid_argument("split: train_frac must be in (0,1)");
  ObservationSet train, holdout;
  train.names = holdout.names = obs.names;
  for (int k = 0; k < obs.K(); ++k) {
    const Index n = obs.groups[k].rows();
    if (n < 4)
      throw std::invalid_argument("split: group " + std::to_string(k + 1) +
                                  " has fewer than 4 rows");
    Index n_train = static_cast<Index>(
        std::llround(train_frac * static_cast<double>(n)));
    n_train = std::clamp<Index>(n_train, 2, n - 2);

    std::vector<Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k));
    for (Index i = n - 1; i > 0; --i)
      std::swap(idx[i], idx[rng.uniform_int(static_cast<std::uint64_t>(i + 1))]);

    std::vector<Index> tr(idx.begin(), idx.begin() + n_train);
    std::vector<Index> ho(idx.begin() + n_train, idx.end());
    std::sort(tr.begin(), tr.end());
    std::sort(ho.begin(), ho.end());
    Matrix mt(n_train, obs.p()), mh(n - n_train, obs.p());
    for (size_t i = 0; i < tr.size(); ++i) mt.row(i) = obs.groups[k].row(tr[i]);
    for (size_t i = 0; i < ho.size(); ++i) mh.row(i) = obs.groups[k].row(ho[i]);
    train.groups.push_back(std::move(mt));
    holdout.groups.push_back(std::move(mh));
  }
  return {std::move(train), std::move(holdout)};
}

// Shortest round-trip decimal formatting.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Writes via a temporary file and rename, so readers never see partial output.
inline void write_text_atomic(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << body;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline void write_matrix_csv(const std::string& path, const Matrix& m,
                             const std::vector<std::string>& header) {
  std::string body;
  if (!header.empty()) {
    for (size_t j = 0; j < header.size(); ++j) {
      if (j) body += ',';
      body += header[j];
    }
    body += '\n';
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) body += ',';
      body += format_double(m(i, j));
    }
    body += '\n';
  }
  write_text_atomic(path, body);
}

}  // namespace logshift
