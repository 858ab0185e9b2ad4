#pragma once

#include <vector>

namespace instanton {

// Codimension available to an l-factor intersection configuration at charge k:
// 4l - 8k + 3.  Negative means the configuration cannot close up at all.
int dimension_budget(int k, int l);

// A way the degenerate locus could contribute: factors grouped into blocks, the
// distinguished block (blocks[0], at least two factors) absorbing the extra
// codimension-5 collision and every other block a codimension-4 one.  Blocks are
// stored canonically (each ascending, tail blocks by least element); the ordered-
// tuple realizations collapsed into a canonical certificate are recorded as
// multiplicities.
struct PartitionCertificate {
  std::vector<std::vector<int>> blocks;
  long within_block_orderings = 1;  // product over blocks of |I|!
  long tail_block_orderings = 1;    // (p-1)! orderings of the undistinguished blocks
  int p() const { return static_cast<int>(blocks.size()); }
};

struct ContributionQuery {
  int k = 1;
  std::vector<int> dims;           // one entry per factor, each in 0..3
  bool relax_block_bound = false;  // allow p <= 2k-1 instead of p <= k
};

// All certificates for the given factor dimensions: blocks[0] satisfies
// sum(dims) = 4|I| - 5, every other block sum(dims) = 4|I| - 4, and the block
// count respects the (possibly relaxed) bound.  Throws CombinatorialBudgetExceeded
// for more than 14 factors and DomainError for dimensions outside 0..3.
std::vector<PartitionCertificate> enumerate_contributions(const ContributionQuery& q);

// Unpruned oracle: walks every set partition (restricted growth strings) and
// every distinguished-block choice; at most 8 factors.  Counting unit matches
// enumerate_contributions: (partition, distinguished block).
long count_certificates_bruteforce(const ContributionQuery& q);

// Exhaustive scan over k in [k_min, k_max] and l in [2, l_max]: for every factor-
// dimension vector meeting the budget, no certificate may survive the block bound
// p <= k, and every witness found under the relaxed bound must have exactly
// p = 2k-1 blocks.  The charge-1 case is excluded on purpose: there the scan
// finds certificates, which is the anomaly this library quantifies.
struct VanishingReport {
  int k_min = 2, k_max = 2, l_max = 2;
  long dims_scanned = 0;
  long certificates = 0;     // strict bound; must stay 0
  long near_miss_dims = 0;   // dims vectors admitting a relaxed-bound certificate
  long near_miss_bad_p = 0;  // relaxed witnesses with p != 2k-1; must stay 0
  bool pass() const { return certificates == 0 && near_miss_bad_p == 0; }
};

VanishingReport verify_vanishing(int k_min = 2, int k_max = 5, int l_max = 12);

}  // namespace instanton
