#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "findmy/term.hpp"

namespace findmy {

/// Actions annotating protocol steps; lemmas quantify over these.
enum class EventKind {
  KeyEst,         // (O, L, d0, SK0)
  LPFS1,          // (L, O, d0, SK0, d1, SK1)
  LPFS2,          // (L, O, d0, SK0, di, SKi)
  LtkReveal_d0,   // (O, L, d0)
  LtkReveal_SK0,  // (O, L, SK0)
  Reveal_di,      // (O, L, di)
  Reveal_ski,     // (O, L, SKi)
  Floc,           // (loc, d_f, p_i)
  Ok_s,           // (L, O, d0, SK0)
  ServerRecv,     // (S, h(p_i))
  OwnerQuery,     // (O, h(p_i))
  OwnerDecrypt,   // (O, L, loc, tF)
};

std::string_view event_name(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);
int event_arity(EventKind kind);
std::span<const EventKind> all_event_kinds();

/// One action of a symbolic trace. Timestamps are trace positions.
struct TraceEvent {
  EventKind kind;
  std::vector<Term> params;
  std::size_t timestamp = 0;

  bool operator==(const TraceEvent&) const = default;
};

}  // namespace findmy
