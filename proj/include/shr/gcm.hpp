#pragma once

#include <string>
#include <vector>

#include "shr/production.hpp"

namespace shr {

/// Component-model labels and actions.
///
/// A running component is an edge f(g, l, s): g is its manager port, l its
/// location, s its store. am(g, l') is an autonomic manager that steers the
/// component(s) sharing g; sigma(s) is the store state itself.
///
/// The adaptation productions below all rewrite a single f edge (or a sigma
/// edge, for the store's half of copy). Their synchronizing tentacle and
/// communicated vector follow the component-model operations: migrate, start
/// at a fresh location, replicate sharing or duplicating state, copy with a
/// store snapshot, and kill.
namespace gcm {

inline const Label component_label{"f", 3};
inline const Label manager_label{"am", 2};
inline const Label store_label{"sigma", 1};

// Action signatures. The store-side replication action carries a "_store"
// role suffix because the component-side action named "rep" communicates a
// different vector.
inline const ActionSig go_action{"go", 2};
inline const ActionSig start_action{"start_sigma", 3};
inline const ActionSig rep_action{"rep", 2};
inline const ActionSig rep_sigma_action{"rep_sigma", 2};
inline const ActionSig copy_action{"copy", 3};
inline const ActionSig rep_store_action{"rep_store", 1};
inline const ActionSig kill_action{"kill", 0};

/// f(g,l,s) moves to a received location: input go(g2,l2) on the manager
/// port, rhs f(g2,l2,s) with the old g and l kept as bare nodes.
Production go();

/// f(g,l,s) restarts against a received manager/location/store triple:
/// input start_sigma(g2,l2,s2), rhs f(g2,l2,s2) + sigma(s2), old g,l,s bare.
Production start();

/// Replication sharing the store: input rep(g2,l2), rhs keeps f(g,l,s) and
/// adds f(g2,l2,s) on the same s.
Production rep_share();

/// Replication onto a private fresh store: input rep_sigma(g2,l2), rhs
/// keeps f(g,l,s) and adds f(g2,l2,s2) + sigma(s2) with s2 fresh.
Production rep_fresh();

/// Copy with store duplication, component half: input copy(g2,s2,l2) on the
/// manager port and output rep_store(s2) on the store port, rhs f(g,l,s) +
/// f(g2,l2,s2).
Production copy();

/// Copy, store half: sigma(s) inputs rep_store(s2) and becomes
/// sigma(s) + sigma(s2).
Production store_rep();

/// f(g,l,s) disappears; its nodes stay behind.
Production kill();

/// All of the above, in the order listed.
std::vector<Production> all_productions();

/// How one communicated slot of an emitted action is filled.
struct CommSlot {
    enum class Kind { Existing, Fresh } kind = Kind::Fresh;
    std::size_t tentacle = 0; // manager tentacle to forward, when Existing
};

/// Manager-side emitter: am(x0, x1) outputs `action` on tentacle 0 with the
/// requested vector and survives unchanged. Fresh slots declare fresh nodes
/// "a0", "a1", ... at their positions. Throws Error(ArityMismatch) when the
/// slot count disagrees with the action.
Production am_emitter(const ActionSig& action, const std::vector<CommSlot>& slots);

} // namespace gcm
} // namespace shr
