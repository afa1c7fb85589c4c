//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BLOCKMOL_ELEMENT_HPP_
#define BLOCKMOL_ELEMENT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace blockmol {

/// Supported element set. Wildcard is the attachment-point placeholder atom
/// ("*" in SMILES) and is exempt from valence rules.
enum class Element : std::uint8_t {
  kB,
  kC,
  kN,
  kO,
  kP,
  kS,
  kF,
  kCl,
  kBr,
  kI,
  kWildcard,
};

inline constexpr int kElementCount = 11;

std::string_view element_symbol(Element e);

/// Lookup by case-sensitive symbol ("Cl", "C", "*", ...). Aromatic lowercase
/// forms are not resolved here; the parser handles those.
std::optional<Element> element_from_symbol(std::string_view symbol);

/// True for elements that may carry the aromatic flag (b, c, n, o, p, s).
bool element_aromatic_capable(Element e);

/// Normal valence alternatives in ascending order (empty for the wildcard).
std::span<const int> element_valences(Element e);

/// Maximum bond-order sum allowed for the element at the given formal charge.
/// Charge widens the shell for N/O/P/S-type elements and narrows it for B/C.
int element_max_valence(Element e, int formal_charge);

}  // namespace blockmol

#endif  // BLOCKMOL_ELEMENT_HPP_
