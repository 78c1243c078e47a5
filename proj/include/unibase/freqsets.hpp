#pragma once

// Digit-frequency machinery on top of the admissible-word language: block
// sets with prescribed digit counts (exact enumeration, counting and uniform
// sampling), irregular block templates whose digit frequencies oscillate
// between fixed checkpoints, and the dimension lower bounds both families
// certify.

#include <cstdint>
#include <utility>
#include <vector>

#include "unibase/certified.hpp"
#include "unibase/numeric.hpp"
#include "unibase/symbolic.hpp"

namespace unibase {

// Candidate filter budget for exact block-set enumeration: stage k is
// enumerated only while the square of the previous stage stays below this.
inline constexpr size_t kFilterCap = 10'000'000;

// Occurrence vector for words of length `total` over {0..M}: counts[b] is
// the number of b digits.
struct FreqVector {
    std::vector<size_t> counts;
    size_t total = 0;
};

// Stage-k block length 2^k (M+1) floor(N/3). Requires N > 6M so that runs
// inside concatenated blocks stay shorter than N.
size_t block_length(unsigned M, size_t N, unsigned k);

// The 2^M near-uniform count vectors for words of length m over {0..M}:
// each digit below M occurs m/(M+1) or m/(M+1)-1 times and the top digit
// absorbs the remainder. Requires (M+1) | m. Every coordinate deviates from
// m/(M+1) by at most M.
std::vector<FreqVector> freq_vectors(unsigned M, size_t m);

// Exact number of words realizing the vector (a multinomial coefficient).
Int count_words(const FreqVector& v);

// Stage-k block set: all words of length block_length(M, N, k) whose digit
// counts match one of the stage vectors and which split recursively into
// stage-(k-1) members. `words` holds the full enumeration while the filter
// budget allows; afterwards `count` degrades to the certified lower bound
// 2^M (min stage-0 class size)^(2^k).
struct BlockSet {
    unsigned k = 0;
    std::vector<Digits> words;
    Int count;
    bool exact = false;
};
BlockSet simply_normal_blocks(unsigned M, size_t N, unsigned k, size_t cap = kFilterCap);

// Admissible word for x whose tail is a uniform draw of stage-0, stage-1,
// ... blocks appended until the word reaches `depth` digits. Every stage is
// sampled exactly uniformly; deterministic under `seed`.
Word sample_simply_normal(const Rat& x, unsigned M, size_t N, size_t depth, uint64_t seed);

// Slot markers for irregular block templates.
inline constexpr int kFreeAny = -1;     // any digit in {0..M}
inline constexpr int kFreeMiddle = -2;  // any digit in {1..M-1}

// Stage-k irregular block: a free region of c-slots followed by fixed
// near-extremal runs, every N-th c-slot barred from {0, M}. For M = 1 the
// barred slots become forced 01 pairs and the block carries a two-digit
// closing seal. `count` is the exact number of completions.
struct BlockTemplate {
    Alphabet alphabet;
    unsigned k = 0;
    size_t run_length = 0;  // N
    size_t c_length = 0;    // free-region prefix length
    std::vector<int> slots;
    Int count;
};
BlockTemplate irregular_template(unsigned M, size_t N, unsigned k);

// Uniform completion of a template; deterministic under `seed`.
Word fill_template(const BlockTemplate& t, uint64_t seed);

// Admissible word for x: the expansion prefix followed by completed
// irregular blocks of stages 0..k_max, all driven by one seeded stream.
Word sample_irregular(const Rat& x, unsigned M, size_t N, unsigned k_max, uint64_t seed);

// Checkpoint pair (l_k, n_k) for digit b: positions inside the irregular
// tail where the running frequency of b sits at its local low and high.
// Requires M >= 2.
std::pair<size_t, size_t> checkpoint_lengths(unsigned M, size_t N, unsigned k, unsigned b);

// Cap on occurrences of digit b within the free regions of stages 0..k.
Int theta_bound(unsigned M, size_t N, unsigned k, unsigned b);

// Running frequency of one digit at chosen positions.
struct FreqCheckpoint {
    size_t n = 0;
    Rat ratio;
};
struct FreqProfile {
    unsigned digit = 0;
    std::vector<FreqCheckpoint> points;
    Rat lo, hi;  // extremes over the final two checkpoint pairs
    Rat spread;  // hi - lo
};

// Exact prefix-count ratios of `digit` in `w` at each (first, second)
// position pair, with the spread over the last two pairs. Positions are
// 1-based; every position must fit inside the word.
FreqProfile oscillation_evidence(const Word& w, unsigned digit,
                                 const std::vector<std::pair<size_t, size_t>>& checkpoints);

// Hausdorff-dimension lower bound certified by the stage-0 block classes:
// log(min class size) / (m_0 log gamma), evaluated against gamma's upper
// bound. gamma is the largest admissible base for the run length N.
double dim_lower_simply_normal(unsigned M, size_t N, const CertifiedReal& gamma);

// Hausdorff-dimension lower bound certified by the irregular family:
// ((N-1) log(M+1) + log(M-1)) / ((N+1) log gamma) for M >= 2 and the
// two-letter analogue (N-2) log 2 / ((N+1) log gamma) for M = 1.
double dim_lower_irregular(unsigned M, size_t N, const CertifiedReal& gamma);

}  // namespace unibase
