#pragma once

#include <string_view>

namespace hacomp {

// Natural ordering for opaque identifiers: digit runs compare numerically,
// so "2" < "10" and "p9" < "p10". Ties on numeric value fall back to the
// plain byte comparison, which keeps the order total.
bool natural_less(std::string_view a, std::string_view b) noexcept;

struct NaturalLess {
    bool operator()(std::string_view a, std::string_view b) const noexcept {
        return natural_less(a, b);
    }
};

}  // namespace hacomp
