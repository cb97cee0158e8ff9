#include "dwls/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "dwls/allocation.hpp"

namespace dwls {
namespace {

constexpr double kMonotoneSlack = 1e-9;
constexpr int kMaxSimpsonDepth = 40;

void require_monotone(double before, double after) {
  if (after < before - kMonotoneSlack) throw Error("monotonicity violation");
}

class AdaptiveSimpson {
 public:
  explicit AdaptiveSimpson(std::function<double(double)> f) : f_(std::move(f)) {}

  double integrate(double a, double b, double eps) {
    const double fa = f_(a);
    const double fb = f_(b);
    const double m = 0.5 * (a + b);
    const double fm = f_(m);
    require_monotone(fa, fm);
    require_monotone(fm, fb);
    return recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), eps, kMaxSimpsonDepth);
  }

 private:
  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole,
                 double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f_(lm);
    const double frm = f_(rm);
    require_monotone(fa, flm);
    require_monotone(flm, fm);
    require_monotone(fm, frm);
    require_monotone(frm, fb);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }

  std::function<double(double)> f_;
};

bool all_products_zero(std::span<const AdCandidate> ads) {
  return std::all_of(ads.begin(), ads.end(),
                     [](const AdCandidate& a) { return !(a.product() > 0.0); });
}

}  // namespace

std::vector<double> breakpoints(std::size_t bidder, std::span<const AdCandidate> ads,
                                const EvalParams& /*params*/) {
  if (bidder >= ads.size()) throw Error("bidder index out of range");
  const double b = ads[bidder].bid;
  const double c = ads[bidder].base_ctr;
  std::vector<double> cuts{0.0};
  if (c > 0.0) {
    for (std::size_t j = 0; j < ads.size(); ++j) {
      if (j == bidder) continue;
      const double y = ads[j].product() / c;
      if (y > 0.0 && y < b) cuts.push_back(y);
    }
  }
  if (b > 0.0) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

std::vector<BidCurvePiece> bid_curve(std::size_t bidder, std::span<const AdCandidate> ads,
                                     const EvalParams& params) {
  const auto cuts = breakpoints(bidder, ads, params);
  std::vector<BidCurvePiece> pieces;
  std::vector<AdCandidate> probe(ads.begin(), ads.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    BidCurvePiece piece;
    piece.lo = cuts[k];
    piece.hi = cuts[k + 1];
    probe[bidder].bid = 0.5 * (piece.lo + piece.hi);
    const auto ordering = rank_ads(probe, params.max_slots);
    const auto it = std::find(ordering.begin(), ordering.end(), bidder);
    if (it != ordering.end() && probe[bidder].base_ctr > 0.0) {
      piece.slot_rank = static_cast<std::size_t>(it - ordering.begin()) + 1;
      piece.position_factor =
          probe[bidder].base_ctr *
          std::pow(params.pos_base, static_cast<double>(piece.slot_rank - 1));
      const auto ecpm = compute_ecpm(probe, ordering, params);
      double top = 0.0;
      for (std::size_t j = 0; j < ecpm.size(); ++j) {
        if (j != bidder) top = std::max(top, ecpm[j]);
      }
      if (params.infinite_alpha() || top == 0.0) {
        piece.others_norm = top;
      } else {
        double acc = 0.0;
        for (std::size_t j = 0; j < ecpm.size(); ++j) {
          if (j != bidder && ecpm[j] > 0.0) acc += std::pow(ecpm[j] / top, params.alpha);
        }
        piece.others_norm = top * std::pow(acc, 1.0 / params.alpha);
      }
    }
    pieces.push_back(piece);
  }
  return pieces;
}

double piece_pctr(const BidCurvePiece& piece, double y, const EvalParams& params) {
  if (piece.slot_rank == 0) return 0.0;
  const double own = y * piece.position_factor;
  if (!(own > 0.0)) return 0.0;
  double prom = 1.0;
  if (piece.others_norm > 0.0) {
    if (params.infinite_alpha()) {
      prom = own > piece.others_norm ? 1.0 : (own == piece.others_norm ? 0.5 : 0.0);
    } else {
      prom = 1.0 / (1.0 + std::pow(piece.others_norm / own, params.alpha));
    }
  }
  return piece.position_factor * std::pow(prom, params.beta);
}

double bidder_pctr(std::size_t bidder, std::span<const AdCandidate> ads,
                   const EvalParams& params) {
  if (bidder >= ads.size()) throw Error("bidder index out of range");
  if (all_products_zero(ads)) return 0.0;
  const auto alloc = allocate_gpa(ads, params);
  const auto it = std::find(alloc.ordering.begin(), alloc.ordering.end(), bidder);
  if (it == alloc.ordering.end()) return 0.0;
  const auto slot = static_cast<std::size_t>(it - alloc.ordering.begin()) + 1;
  return internal_final_pctr(ads[bidder].base_ctr, slot, alloc.prominence[bidder], params);
}

double bidder_pctr_at(std::size_t bidder, double bid, std::span<const AdCandidate> ads,
                      const EvalParams& params) {
  if (bidder >= ads.size()) throw Error("bidder index out of range");
  std::vector<AdCandidate> probe(ads.begin(), ads.end());
  probe[bidder].bid = bid;
  return bidder_pctr(bidder, probe, params);
}

double integrate_response(const PieceResponse& response, std::span<const double> cuts,
                          double tol, const ConstantPiece& constant_piece) {
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  if (cuts.size() < 2) return 0.0;
  const std::size_t pieces = cuts.size() - 1;
  const double eps = tol / static_cast<double>(pieces);
  double total = 0.0;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pieces; ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    auto f = [&response, k](double y) { return response(k, y); };
    require_monotone(previous, f(lo));
    if (constant_piece(k)) {
      const double mid = f(0.5 * (lo + hi));
      require_monotone(f(lo), mid);
      require_monotone(mid, f(hi));
      total += mid * (hi - lo);
    } else {
      total += AdaptiveSimpson(f).integrate(lo, hi, eps);
    }
    previous = f(hi);
  }
  return total;
}

double myerson_payment(std::size_t bidder, std::span<const AdCandidate> ads,
                       const EvalParams& params, double tol) {
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  if (bidder >= ads.size()) throw Error("bidder index out of range");
  const double b = ads[bidder].bid;
  const double q = bidder_pctr(bidder, ads, params);
  const auto cuts = breakpoints(bidder, ads, params);
  const auto pieces = bid_curve(bidder, ads, params);
  const auto response = [&](std::size_t k, double y) {
    return piece_pctr(pieces[k], y, params);
  };
  // Constant pieces: not shown, or shown with no competition for prominence.
  // Every piece is constant under winner-take-all.
  const auto constant = [&](std::size_t k) {
    return params.infinite_alpha() || pieces[k].slot_rank == 0 || pieces[k].others_norm == 0.0;
  };
  const double area = integrate_response(response, cuts, tol, constant);
  // Quadrature error can push a zero payment a hair below zero.
  return std::clamp(b * q - area, 0.0, b * q);
}

std::vector<double> myerson_payments(std::span<const AdCandidate> ads,
                                     const EvalParams& params, double tol) {
  std::vector<double> out(ads.size());
  for (std::size_t i = 0; i < ads.size(); ++i) out[i] = myerson_payment(i, ads, params, tol);
  return out;
}

}  // namespace dwls
