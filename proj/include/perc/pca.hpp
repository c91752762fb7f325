#pragma once

// One-dimensional PCAs on rings over {0,?,1}. Every kind uses the window
// (cell i, cell i+1 mod n); the random branch listed first in each rule is
// taken iff u < p, where u is the cell's uniform for that step.

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "perc/percolation.hpp"
#include "perc/symbols.hpp"

namespace perc {

enum class PcaKind { kA, kB, kF, kG, kDdet, kR0, kR1, kStavskaya, kFlip };

PcaKind parse_pca_kind(std::string_view name);
const char* to_string(PcaKind kind);

bool uses_randomness(PcaKind kind);
// A, B and Stavskaya act on {0,1} only.
bool binary_only(PcaKind kind);

Symbol3 local_rule(PcaKind kind, Symbol3 left, Symbol3 right, double u, double p);

// Probability of each output symbol (indexed by index_of) for one window.
std::array<double, 3> local_kernel(PcaKind kind, Symbol3 left, Symbol3 right, double p);

// Cell i at time t reads uniform_at(field.seed, (i, t), 0); field.p is the
// rule parameter.
Word step(PcaKind kind, const Word& ring, const SiteField& field, std::uint64_t time);

// All configurations stepped with the same per-cell uniforms.
std::vector<Word> coupled_step(PcaKind kind, const std::vector<Word>& rings, const SiteField& field,
                               std::uint64_t time);

// Row t holds the densities of 0, ?, 1 after t steps (row 0 = initial ring).
std::vector<std::array<double, 3>> trajectory_stats(PcaKind kind, const Word& initial, const SiteField& field,
                                                    int steps);

// Exact one-step kernel on rings of length n. States are indexed in base 3
// with cell 0 least significant; for binary-only kinds only ?-free rows are
// filled. Each row is sorted by target index.
struct ExactKernel {
  int n = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
};

std::uint32_t ring_index(const Word& ring);
Word ring_from_index(std::uint32_t index, int n);

ExactKernel exact_kernel(PcaKind kind, int n, double p);
// Apply `first`, then `second`.
ExactKernel compose(const ExactKernel& first, const ExactKernel& second);
// Max entrywise difference over rows filled in both kernels; rows filled in
// only one of them count as difference 1.
double kernel_distance(const ExactKernel& a, const ExactKernel& b);

// B_p versus Flip o Stavskaya on {0,1}^n, n <= 8.
bool stavskaya_identity_check(double p, int n, double tol = 1e-12);

}  // namespace perc
