#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace efstein {

/// A subset of the part indices [0, k), stored as a bitmask.
/// Canonical enumeration order everywhere in the library is ascending
/// bitmask value; this fixes summation orders and witness tie-breaks.
class Subset {
  public:
    constexpr Subset() = default;
    constexpr explicit Subset(std::uint32_t bits) : bits_(bits) {}

    static constexpr Subset empty() { return Subset(0); }
    static constexpr Subset full(int k) { return Subset((std::uint32_t(1) << k) - 1); }
    static constexpr Subset single(int i) { return Subset(std::uint32_t(1) << i); }

    constexpr std::uint32_t bits() const { return bits_; }
    int size() const { return std::popcount(bits_); }
    constexpr bool is_empty() const { return bits_ == 0; }
    constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
    constexpr bool subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr Subset with(int i) const { return Subset(bits_ | (std::uint32_t(1) << i)); }
    constexpr Subset without(int i) const { return Subset(bits_ & ~(std::uint32_t(1) << i)); }
    constexpr Subset complement(int k) const { return Subset(~bits_ & ((std::uint32_t(1) << k) - 1)); }

    friend constexpr Subset operator|(Subset a, Subset b) { return Subset(a.bits_ | b.bits_); }
    friend constexpr Subset operator&(Subset a, Subset b) { return Subset(a.bits_ & b.bits_); }
    friend constexpr Subset operator-(Subset a, Subset b) { return Subset(a.bits_ & ~b.bits_); }
    constexpr bool operator==(const Subset&) const = default;
    constexpr auto operator<=>(const Subset&) const = default;

    /// Elements in ascending order.
    std::vector<int> elements() const {
        std::vector<int> out;
        for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
        return out;
    }

    /// "{0,2,3}" style, for report rows and error messages.
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int i : elements()) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        return s + "}";
    }

  private:
    std::uint32_t bits_ = 0;
};

/// All subsets of `mask` in ascending bitmask order (including empty and mask).
inline std::vector<Subset> subsets_of(Subset mask) {
    std::vector<Subset> out;
    std::uint32_t m = mask.bits();
    std::uint32_t s = 0;
    while (true) {
        out.push_back(Subset(s));
        if (s == m) break;
        s = (s - m) & m;
    }
    return out;
}

/// All subsets of [0,k) in ascending bitmask order.
inline std::vector<Subset> all_subsets(int k) { return subsets_of(Subset::full(k)); }

/// (-1)^{|S|} as a double.
inline double parity_sign(Subset s) { return (s.size() & 1) ? -1.0 : 1.0; }

}  // namespace efstein
