#include "dwls/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dwls {

std::vector<std::size_t> rank_ads(std::span<const AdCandidate> ads, std::size_t k) {
  if (ads.empty()) throw Error("no candidates");
  std::vector<std::size_t> idx(ads.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ads[a].product() > ads[b].product();
  });
  idx.resize(std::min(ads.size(), k));
  return idx;
}

EcpmVector compute_ecpm(std::span<const AdCandidate> ads,
                        std::span<const std::size_t> ordering,
                        const EvalParams& params) {
  EcpmVector out{std::vector<double>(ads.size(), 0.0)};
  double pos = 1.0;
  for (std::size_t i : ordering) {
    if (i >= ads.size()) throw Error("ordering index out of range");
    out.values[i] = ads[i].product() * pos;
    pos *= params.pos_base;
  }
  return out;
}

ProminenceVector gpa_allocate(const EcpmVector& ecpm, double alpha) {
  if (!(alpha > 1.0)) throw Error("alpha must exceed 1");
  const auto& e = ecpm.values;
  const double top = e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
  if (!(top > 0.0)) throw Error("degenerate instance");

  ProminenceVector prom{std::vector<double>(e.size(), 0.0)};
  if (std::isinf(alpha)) {
    const auto ties = static_cast<double>(std::count(e.begin(), e.end(), top));
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == top) prom.weights[i] = 1.0 / ties;
    }
    return prom;
  }
  // Normalizing by the max keeps the powers in [0,1] and makes the result
  // invariant to a common scale factor up to roundoff.
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] > 0.0) {
      prom.weights[i] = std::pow(e[i] / top, alpha);
      total += prom.weights[i];
    }
  }
  for (auto& w : prom.weights) w /= total;
  return prom;
}

double optimal_welfare(const EcpmVector& ecpm, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0,1)");
  const double alpha = 1.0 / (1.0 - beta);
  const auto& e = ecpm.values;
  const double top = e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
  if (!(top > 0.0)) return 0.0;
  double acc = 0.0;
  for (double v : e) {
    if (v > 0.0) acc += std::pow(v / top, alpha);
  }
  return top * std::pow(acc, 1.0 / alpha);
}

double internal_welfare(const EcpmVector& ecpm, const ProminenceVector& prom,
                        double beta) {
  if (ecpm.size() != prom.size()) throw Error("ecpm/prominence size mismatch");
  double w = 0.0;
  for (std::size_t i = 0; i < ecpm.size(); ++i) {
    if (prom[i] > 0.0) w += ecpm[i] * std::pow(prom[i], beta);
  }
  return w;
}

std::vector<std::size_t> words_from_prominence(const ProminenceVector& prom,
                                               std::size_t word_limit) {
  const std::size_t n = prom.size();
  const double L = static_cast<double>(word_limit);
  std::vector<double> raw(n);
  std::vector<std::size_t> budget(n);
  std::size_t floor_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = std::max(prom[i], 0.0) * L;
    budget[i] = static_cast<std::size_t>(std::floor(raw[i]));
    floor_total += budget[i];
  }
  auto target = static_cast<std::size_t>(std::llround(L * prom.sum()));
  target = std::min(target, word_limit);
  if (target <= floor_total) return budget;

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i] >= 1.0) eligible.push_back(i);
  }
  if (eligible.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (raw[i] > 0.0) eligible.push_back(i);
    }
  }
  if (eligible.empty()) return budget;

  std::stable_sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
    return raw[a] - std::floor(raw[a]) > raw[b] - std::floor(raw[b]);
  });
  // More leftovers than eligible ads only happens when many ads hold
  // sub-word shares; cycle through the eligible ones again.
  for (std::size_t left = target - floor_total, j = 0; left > 0; --left, ++j) {
    ++budget[eligible[j % eligible.size()]];
  }
  return budget;
}

GpaAllocation allocate_gpa(std::span<const AdCandidate> ads, const EvalParams& params) {
  GpaAllocation a;
  a.ordering = rank_ads(ads, params.max_slots);
  a.ecpm = compute_ecpm(ads, a.ordering, params);
  a.prominence = gpa_allocate(a.ecpm, params.alpha);
  return a;
}

}  // namespace dwls
