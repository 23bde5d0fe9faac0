#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "findmy/rewrite.hpp"
#include "findmy/term.hpp"

namespace findmy::oracle {

/// Round-based closure over a finite universe: the subterms of the knowledge
/// and the target, plus pk(a) for every SS_fn(a, pk(b)) so that the swapped
/// ECDH derivation is available. Round 0 holds the knowledge and public
/// names; each round applies every constructor whose arguments are known and
/// every destructor that reduces at the root to a universe member. Returns
/// the first round containing `target`, or nullopt if it is not reached
/// within `max_rounds`.
std::optional<std::size_t> naive_round(const std::vector<Term>& kb, const Term& target, std::size_t max_rounds,
                                       const RewriteSystem& rs = RewriteSystem::standard());

/// First round of every universe member reached within `max_rounds`.
std::map<Term, std::size_t> naive_closure(const std::vector<Term>& kb, const std::vector<Term>& extra,
                                          std::size_t max_rounds, const RewriteSystem& rs = RewriteSystem::standard());

}  // namespace findmy::oracle
