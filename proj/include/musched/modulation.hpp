#pragma once

#include "musched/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace musched {

// Square Gray-mapped constellation with unit average symbol energy. Bits per
// symbol split evenly between the I and Q axes; the per-axis bit group is a
// binary-reflected Gray codeword.
struct ModulationScheme {
    enum class Kind { Qpsk, Qam16, Qam64 };

    Kind kind = Kind::Qpsk;
    int Q = 2;               // bits per symbol
    int levels = 2;          // PAM levels per axis
    double scale = 0.0;      // amplitude normalization

    static ModulationScheme make(Kind kind);
    static ModulationScheme from_name(const std::string& name);
    static ModulationScheme from_bits(int Q);

    std::string name() const;

    // bits[0..Q-1] -> symbol; first Q/2 bits drive the I axis
    cxd map(const std::uint8_t* bits) const;

    // minimum-distance hard decision, per-axis slicing
    void demap(cxd y, std::uint8_t* bits) const;

    double axis_level(int gray_index) const;
};

}  // namespace musched
