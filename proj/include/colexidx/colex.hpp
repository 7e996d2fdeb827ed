#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "colexidx/automaton.hpp"
#include "colexidx/relation.hpp"

namespace colexidx {

struct ColexViolation {
  // Axiom 1: lambda(u) < lambda(v) but not u < v.
  // Axiom 2: u < v with equal labels, edges (u_pred, u) and (v_pred, v), but
  //          not u_pred <= v_pred.
  int axiom = 0;
  State u = 0;
  State v = 0;
  State u_pred = 0;
  State v_pred = 0;
};

struct ColexCertificate {
  std::optional<ColexViolation> violation;
  bool ok() const noexcept { return !violation.has_value(); }
};

/// Checks both co-lex axioms of `ord` on the input-consistent automaton `a`.
ColexCertificate check_colex(const Nfa& a, const PartialOrder& ord);

struct ClosureOptions {
  // When set, the worklist pops a pseudo-random pending pair instead of the
  // top of the stack. The result must not depend on it.
  std::optional<std::uint64_t> shuffle_seed;
};

/// The forced-pair closure seeded with (u, v).
///
/// Starts from {(u, v)} plus every pair whose labels are strictly ordered, then
/// propagates backwards along equally labelled edge pairs (u'', u'), (v'', v')
/// with u'' != v'' using a stack. Returns nullopt as soon as a pair and its
/// reverse are both present, or when the final relation has a cycle. A
/// non-empty result is contained in every co-lex order containing (u, v), and
/// its reflexive-transitive closure is one such order.
///
/// Requires a valid automaton and u != v.
std::optional<Relation> closure_with_pair(const Nfa& a, State u, State v,
                                          const ClosureOptions& options = {});

struct RhoOptions {
  unsigned threads = 1;
  // Marks every strict pair of a successful closure as known-good so later
  // pairs skip their own closure run. Off by default.
  bool seed_from_closures = false;
};

/// (u, v) is present iff closure_with_pair(a, u, v) is non-empty. Diagonal
/// entries are left unset.
Relation rho_exists(const Nfa& a, const RhoOptions& options = {});

/// Strongly connected components of the off-diagonal graph of `rel`.
/// Component ids are assigned in order of each component's smallest member.
std::vector<std::uint32_t> scc(const Relation& rel);

/// The order obtained from a rho_exists relation: states in the same
/// component are compared by their rank in `enumeration` (a permutation of
/// the states; empty means identity), all others by `rho`; then
/// reflexive-transitive closure. Throws std::logic_error if the closure is
/// not antisymmetric.
PartialOrder order_from_rho(const Relation& rho, std::span<const State> enumeration = {});

/// rho_exists followed by order_from_rho.
PartialOrder build_triangle(const Nfa& a, std::span<const State> enumeration = {},
                            const RhoOptions& options = {});

}  // namespace colexidx
