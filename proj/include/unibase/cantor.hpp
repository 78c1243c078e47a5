#pragma once

// Geometric Cantor-set machinery: level covers of the base set of a
// run-constrained expansion family, sibling gaps, thickness (levelwise and
// ordered), dimension estimates, convex-hull sequences, intersections and
// sum images.

#include <optional>
#include <vector>

#include "unibase/solver.hpp"

namespace unibase {

// A solved basic interval: the word it belongs to and its endpoint bases.
struct CoverInterval {
    Word word;
    PeriodicSeq lo_seq, hi_seq;
    CertifiedReal lo, hi;
};

// The open gap between two adjacent same-parent intervals of one level.
// `left` indexes the sibling interval to the gap's left within its level.
struct CoverGap {
    size_t left;
    CertifiedReal lo, hi;  // lo = left sibling's hi, hi = right sibling's lo
};

struct CoverLevel {
    std::vector<CoverInterval> intervals;  // sorted, pairwise disjoint
    std::vector<CoverGap> gaps;            // between adjacent siblings
};

// Levelwise cover of the set of bases whose expansion of x extends the
// fixed prefix with digits avoiding runs 0^block and M^block. levels[n]
// holds the n-level basic intervals; gaps of level n >= 1 sit between
// same-parent siblings and persist in all deeper levels.
struct Cover {
    Rat x;
    Alphabet alphabet;
    unsigned j = 0;     // construction index (block = m + j)
    size_t block = 0;   // forbidden-run length
    Word prefix;        // m quasi-greedy digits of x, then M^block
    size_t ell = 0;     // 1-based position of the first nonzero prefix digit
    std::vector<CoverLevel> levels;

    size_t level() const { return levels.size() - 1; }
    const std::vector<CoverInterval>& intervals() const { return levels.back().intervals; }
};

inline constexpr size_t kEnumerationCap = 2'000'000;

// Worker threads used to solve cover intervals (default 1).
void set_worker_threads(unsigned n);
unsigned worker_threads();

// Number of words of length n over {0..M} containing no run of 0 or of M
// of length >= block (run-constraint transfer count).
Int count_omega(unsigned M, size_t block, size_t n);

// All admissible words of suffix length n: the prefix for x extended by
// every length-n suffix obeying the run constraint, lexicographically
// sorted. Throws std::length_error beyond cap.
std::vector<Word> enumerate_omega(const Rat& x, unsigned M, unsigned j, size_t n,
                                  size_t cap = kEnumerationCap);

// A uniformly random admissible word of suffix length n (for branch
// sampling when enumeration is infeasible). Deterministic under seed.
Word sample_omega(const Rat& x, unsigned M, unsigned j, size_t n, uint64_t seed);

// Build the cover of x through the given level count. tol <= 0 selects the
// automatic tolerance 2^-(|prefix| + levels + block + 40), small against
// the predicted smallest gap.
Cover build_cover(const Rat& x, unsigned M, unsigned j, size_t levels, const Rat& tol = Rat(0));

// Levelwise thickness through the cover's deepest level: the min over all
// sibling gaps of min(|left interval| / |gap|, |right interval| / |gap|),
// computed from certified bounds (interval lengths from below, gaps from
// above). Missing right siblings contribute nothing (the +inf convention).
// Throws std::invalid_argument when the cover has no gaps and
// precision_error when an endpoint enclosure overlaps a gap.
Rat thickness_star(const Cover& c);

// Thickness along the ordered derived sequence: gaps are processed in
// decreasing length order; each removal splits its containing component
// into a left and right piece, contributing min(|L|/|O|, |R|/|O|). The
// intervals define the hull; gaps must lie inside it, pairwise disjoint.
Rat thickness_ordered(const std::vector<RatInterval>& intervals,
                      const std::vector<RatInterval>& gaps);

// Flattened pieces and gaps of a cover's deepest level, as plain rational
// intervals (pieces shrunk to certified inner bounds, gaps widened to outer
// bounds), ready for thickness_ordered or the sweep operations below.
std::vector<RatInterval> cover_pieces(const Cover& c);
std::vector<RatInterval> cover_gaps(const Cover& c);

// dim_H lower bound from thickness: log 2 / log(2 + 1/tau). tau > 0.
double newhouse_dim_bound(const Rat& tau);

// Symbolic Moran-type dimension estimate (sum of log counts) over
// (sum of lengths * log base), with the running partial values.
struct MoranEstimate {
    double value = 0;
    std::vector<double> partials;
};
MoranEstimate moran_dim_estimate(const std::vector<Int>& counts,
                                 const std::vector<size_t>& lengths, unsigned base);

// Convex hulls [alpha_j, beta_j] of the block = 2^j family for x, solved
// for j in [j_min, j_max]. Construction asserts the ordering
// alpha_j < beta_j < alpha_{j+1} and the three explicit hull bounds; an
// ordering violation throws std::runtime_error.
struct HullEntry {
    unsigned j = 0;
    CertifiedReal alpha, beta;
};
struct HullSequence {
    Rat x;
    Alphabet alphabet;
    size_t m = 0;  // finite-expansion digit count of x
    std::vector<HullEntry> entries;
};
HullSequence build_hulls(const Rat& x, unsigned M, unsigned j_min, unsigned j_max,
                         const Rat& tol = Rat(0));

// Pairwise intersections of two sorted interval lists; empties dropped.
std::vector<RatInterval> intersect_intervals(const std::vector<RatInterval>& a,
                                             const std::vector<RatInterval>& b);
std::vector<RatInterval> intersect_covers(const Cover& a, const Cover& b);

// Union of {p + lambda*q : p in a_i, q in b_j} over interval pairs. Holes
// of width <= resolution are bridged; the largest bridged component is
// reported together with the separating holes wider than resolution.
struct SumImageResult {
    RatInterval largest{Rat(0), Rat(0)};
    std::vector<RatInterval> holes;
};
SumImageResult sum_image_check(const std::vector<RatInterval>& a,
                               const std::vector<RatInterval>& b, const Rat& lambda,
                               const Rat& resolution);
SumImageResult sum_image_check(const Cover& a, const Cover& b, const Rat& lambda,
                               const Rat& resolution);

}  // namespace unibase
