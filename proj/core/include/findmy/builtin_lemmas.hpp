#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "findmy/trace_engine.hpp"

namespace findmy {

/// The twelve properties of the offline-finding model, in reporting order.
const std::vector<Lemma>& builtin_lemmas();

const Lemma* find_builtin_lemma(std::string_view name);

}  // namespace findmy
