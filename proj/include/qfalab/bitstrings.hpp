#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfalab {

// Bit strings are written x_1 x_2 ... x_len, so x_1 is the most significant
// bit of the integer value.
inline std::string bits_of(std::size_t value, std::size_t len) {
    std::string s(len, '0');
    for (std::size_t i = 0; i < len; ++i)
        if (value & (std::size_t{1} << (len - 1 - i))) s[i] = '1';
    return s;
}

inline std::size_t value_of(const std::string& bits) {
    std::size_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit string containing '" +
                                        std::string(1, c) + "'");
        v = (v << 1) | std::size_t(c - '0');
    }
    return v;
}

}  // namespace qfalab
