//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/element.hpp"

#include <algorithm>
#include <array>

namespace blockmol {

namespace {

struct ElementInfo {
  std::string_view symbol;
  bool aromatic_capable;
  std::array<int, 3> valences;  // zero-padded
  int valence_count;
};

constexpr std::array<ElementInfo, kElementCount> kElements = {{
    {"B", true, {3, 0, 0}, 1},
    {"C", true, {4, 0, 0}, 1},
    {"N", true, {3, 5, 0}, 2},
    {"O", true, {2, 0, 0}, 1},
    {"P", true, {3, 5, 0}, 2},
    {"S", true, {2, 4, 6}, 3},
    {"F", false, {1, 0, 0}, 1},
    {"Cl", false, {1, 0, 0}, 1},
    {"Br", false, {1, 0, 0}, 1},
    {"I", false, {1, 0, 0}, 1},
    {"*", false, {0, 0, 0}, 0},
}};

const ElementInfo &info(Element e) {
  return kElements[static_cast<std::size_t>(e)];
}

}  // namespace

std::string_view element_symbol(Element e) {
  return info(e).symbol;
}

std::optional<Element> element_from_symbol(std::string_view symbol) {
  for (int i = 0; i < kElementCount; ++i) {
    if (kElements[static_cast<std::size_t>(i)].symbol == symbol) {
      return static_cast<Element>(i);
    }
  }
  return std::nullopt;
}

bool element_aromatic_capable(Element e) {
  return info(e).aromatic_capable;
}

std::span<const int> element_valences(Element e) {
  const ElementInfo &ei = info(e);
  return {ei.valences.data(), static_cast<std::size_t>(ei.valence_count)};
}

int element_max_valence(Element e, int formal_charge) {
  const ElementInfo &ei = info(e);
  if (ei.valence_count == 0) {
    return 8;  // wildcard: effectively unconstrained
  }
  int base = ei.valences[static_cast<std::size_t>(ei.valence_count - 1)];
  int adjusted;
  if (e == Element::kB || e == Element::kC) {
    adjusted = base - std::abs(formal_charge);
  } else {
    adjusted = base + formal_charge;
  }
  return std::max(adjusted, 0);
}

}  // namespace blockmol
