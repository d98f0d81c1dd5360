#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "kopl/kb.hpp"

namespace kopl::fixtures {

/// JSON text of the "nba-mini" fixture: 6 concepts, 5 entities.
const std::string& nba_mini_json();
KnowledgeBase nba_mini();

/// Scripted expansion of nba-mini to `entity_count` entities (players, teams, cities) with
/// heights, masses, birth dates, populations with point-in-time qualifiers, draft and team
/// membership relations. The five fixture entities are always kept unchanged.
nlohmann::json expand_nba_mini(std::size_t entity_count, std::uint64_t seed);

} // namespace kopl::fixtures
