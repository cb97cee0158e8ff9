#pragma once

// Myerson payments for the GPA word-length auction.
//
//   p_i = b_i * q_i(b) - \int_0^{b_i} q_i(y, b_{-i}) dy
//
// where q_i is bidder i's internal final pCTR when the whole allocation is
// recomputed with its bid replaced by y. The own-bid axis is cut at every
// point where bidder i ties another ad's bid*base_ctr product; inside a piece
// the ranking is fixed and q_i has a closed form, which is integrated with
// adaptive Simpson (beta < 1) or summed exactly (beta = 1, step integrand).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dwls/model.hpp"

namespace dwls {

/// One interval of bidder i's own-bid axis with a constant ranking.
struct BidCurvePiece {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t slot_rank = 0;  // 0 when bidder i is not shown on this piece
  double position_factor = 0.0;  // base_ctr_i * pos_base^(slot-1)
  // (sum_{j != i shown} ecpm_j^alpha)^(1/alpha); the max for infinite alpha.
  double others_norm = 0.0;
};

/// Sorted, de-duplicated cut points in [0, b_i]: 0, b_i and every y where
/// y*base_ctr_i equals another ad's bid*base_ctr.
std::vector<double> breakpoints(std::size_t bidder, std::span<const AdCandidate> ads,
                                const EvalParams& params);

/// The pieces between consecutive breakpoints.
std::vector<BidCurvePiece> bid_curve(std::size_t bidder, std::span<const AdCandidate> ads,
                                     const EvalParams& params);

/// q_i(y) on one piece.
double piece_pctr(const BidCurvePiece& piece, double y, const EvalParams& params);

/// q_i at the submitted bids, from a full recomputation of the allocation.
/// Zero when every ad has zero bid*base_ctr.
double bidder_pctr(std::size_t bidder, std::span<const AdCandidate> ads,
                   const EvalParams& params);

/// Same, with bidder i's bid replaced by `bid`.
double bidder_pctr_at(std::size_t bidder, double bid, std::span<const AdCandidate> ads,
                      const EvalParams& params);

/// Response on piece `k` (between cuts[k] and cuts[k+1]) at bid y. Each
/// piece is evaluated with its own branch at both ends.
using PieceResponse = std::function<double(std::size_t piece, double y)>;

/// True when the response on piece k does not vary with y inside the piece.
using ConstantPiece = std::function<bool(std::size_t piece)>;

/// Integral of a nondecreasing response over [cuts.front(), cuts.back()],
/// piece by piece. Constant pieces are summed exactly from their midpoint
/// value; the rest use adaptive Simpson with absolute tolerance tol/pieces
/// per piece. Throws "monotonicity violation" if a sampled value drops by
/// more than 1e-9.
double integrate_response(const PieceResponse& response, std::span<const double> cuts,
                          double tol, const ConstantPiece& constant_piece);

inline double integrate_response(const PieceResponse& response, std::span<const double> cuts,
                                 double tol, bool piecewise_constant) {
  return integrate_response(response, cuts, tol,
                            [piecewise_constant](std::size_t) { return piecewise_constant; });
}

/// Myerson payment of one bidder. tol must be positive.
double myerson_payment(std::size_t bidder, std::span<const AdCandidate> ads,
                       const EvalParams& params, double tol);

/// Payments for every ad in input order.
std::vector<double> myerson_payments(std::span<const AdCandidate> ads,
                                     const EvalParams& params, double tol);

inline constexpr double kDefaultPaymentTolerance = 1e-9;

}  // namespace dwls
