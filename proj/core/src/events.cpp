#include "findmy/events.hpp"

#include <array>

namespace findmy {
namespace {

struct KindInfo {
  EventKind kind;
  std::string_view name;
  int arity;
};

constexpr std::array<KindInfo, 12> kKinds{{
    {EventKind::KeyEst, "KeyEst", 4},
    {EventKind::LPFS1, "LPFS1", 6},
    {EventKind::LPFS2, "LPFS2", 6},
    {EventKind::LtkReveal_d0, "LtkReveal_d0", 3},
    {EventKind::LtkReveal_SK0, "LtkReveal_SK0", 3},
    {EventKind::Reveal_di, "Reveal_di", 3},
    {EventKind::Reveal_ski, "Reveal_ski", 3},
    {EventKind::Floc, "Floc", 3},
    {EventKind::Ok_s, "Ok_s", 4},
    {EventKind::ServerRecv, "ServerRecv", 2},
    {EventKind::OwnerQuery, "OwnerQuery", 2},
    {EventKind::OwnerDecrypt, "OwnerDecrypt", 4},
}};

constexpr std::array<EventKind, 12> kAll{
    EventKind::KeyEst,     EventKind::LPFS1,      EventKind::LPFS2,      EventKind::LtkReveal_d0,
    EventKind::LtkReveal_SK0, EventKind::Reveal_di, EventKind::Reveal_ski, EventKind::Floc,
    EventKind::Ok_s,       EventKind::ServerRecv, EventKind::OwnerQuery, EventKind::OwnerDecrypt,
};

}  // namespace

std::string_view event_name(EventKind kind) { return kKinds[static_cast<std::size_t>(kind)].name; }

int event_arity(EventKind kind) { return kKinds[static_cast<std::size_t>(kind)].arity; }

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

std::span<const EventKind> all_event_kinds() { return kAll; }

}  // namespace findmy
