#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bellclone {

/// One of the four two-qubit Bell states, encoded by its bit-flip bit `a` and
/// phase-flip bit `b`:
///
///     |B(a,b)> = (1/sqrt 2) sum_x (-1)^(b x) |x, x xor a>
///
/// so B1 = (0,0), B2 = (0,1), B3 = (1,0), B4 = (1,1). The first qubit of the
/// pair belongs to Alice, the second to Bob.
struct BellLabel {
    std::uint8_t a = 0;
    std::uint8_t b = 0;

    /// 0..3 for B1..B4. Matches lexicographic order of (a, b).
    constexpr int index() const {
        return 2 * a + b;
    }
    static constexpr BellLabel from_index(int index) {
        return BellLabel{static_cast<std::uint8_t>((index >> 1) & 1), static_cast<std::uint8_t>(index & 1)};
    }

    /// "B1".."B4".
    std::string name() const;
    /// Two-character bit form "ab" used by the text serialization.
    std::string bits() const;

    constexpr auto operator<=>(const BellLabel &) const = default;
};

inline constexpr BellLabel B1{0, 0};
inline constexpr BellLabel B2{0, 1};
inline constexpr BellLabel B3{1, 0};
inline constexpr BellLabel B4{1, 1};
inline constexpr BellLabel kAllBellLabels[4] = {B1, B2, B3, B4};

/// Accepts "B1".."B4" (case-insensitive 'b'). Throws std::invalid_argument otherwise.
BellLabel parse_bell_label(std::string_view text);

/// One Bell label per Bell pair, pairs ordered 1..N.
using BellString = std::vector<BellLabel>;

BellString repeat(BellLabel label, std::size_t copies);
std::string to_string(const BellString &labels);

enum class Party { Alice, Bob };

}  // namespace bellclone
