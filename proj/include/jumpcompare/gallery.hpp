#pragma once

// Built-in scenarios compiled into the library.

#include "jumpcompare/scenario.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace jumpcompare {

struct GalleryEntry {
  ScenarioConfig config;
  bool expect_pass = true;  // expected checker outcome
  std::string_view summary;
};

//! The ten scenarios, in a fixed order.
const std::vector<GalleryEntry>& gallery();

//! Lookup by id; "drift-violation" is accepted for "drift-order-fail".
std::optional<GalleryEntry> find_gallery(std::string_view id);

}  // namespace jumpcompare
