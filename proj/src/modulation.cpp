#include "musched/modulation.hpp"

#include <cmath>
#include <stdexcept>

namespace musched {

namespace {

int gray_encode(int k) { return k ^ (k >> 1); }

int gray_decode(int g) {
    int k = g;
    for (int shift = 1; shift < 8; shift <<= 1) k ^= k >> shift;
    return k;
}

int bits_to_int(const std::uint8_t* bits, int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | (bits[i] & 1);
    return v;
}

void int_to_bits(int v, std::uint8_t* bits, int n) {
    for (int i = n - 1; i >= 0; --i) {
        bits[i] = static_cast<std::uint8_t>(v & 1);
        v >>= 1;
    }
}

}  // namespace

ModulationScheme ModulationScheme::make(Kind kind) {
    ModulationScheme m;
    m.kind = kind;
    switch (kind) {
        case Kind::Qpsk: m.Q = 2; break;
        case Kind::Qam16: m.Q = 4; break;
        case Kind::Qam64: m.Q = 6; break;
    }
    m.levels = 1 << (m.Q / 2);
    // E[|s|^2] = 2 * (L^2 - 1) / 3 * scale^2 = 1
    m.scale = std::sqrt(3.0 / (2.0 * (m.levels * m.levels - 1.0)));
    return m;
}

ModulationScheme ModulationScheme::from_name(const std::string& name) {
    if (name == "qpsk") return make(Kind::Qpsk);
    if (name == "qam16" || name == "16qam") return make(Kind::Qam16);
    if (name == "qam64" || name == "64qam") return make(Kind::Qam64);
    throw std::invalid_argument("ModulationScheme: unknown modulation '" + name + "'");
}

ModulationScheme ModulationScheme::from_bits(int Q) {
    switch (Q) {
        case 2: return make(Kind::Qpsk);
        case 4: return make(Kind::Qam16);
        case 6: return make(Kind::Qam64);
    }
    throw std::invalid_argument("ModulationScheme: Q must be one of {2, 4, 6}");
}

std::string ModulationScheme::name() const {
    switch (kind) {
        case Kind::Qpsk: return "qpsk";
        case Kind::Qam16: return "qam16";
        case Kind::Qam64: return "qam64";
    }
    return "unknown";
}

double ModulationScheme::axis_level(int gray_index) const {
    const int k = gray_decode(gray_index);
    return scale * (2 * k - (levels - 1));
}

cxd ModulationScheme::map(const std::uint8_t* bits) const {
    const int half = Q / 2;
    const double re = axis_level(bits_to_int(bits, half));
    const double im = axis_level(bits_to_int(bits + half, half));
    return {re, im};
}

void ModulationScheme::demap(cxd y, std::uint8_t* bits) const {
    const int half = Q / 2;
    auto slice = [&](double x) {
        const int k = static_cast<int>(std::lround((x / scale + (levels - 1)) / 2.0));
        return gray_encode(std::min(std::max(k, 0), levels - 1));
    };
    int_to_bits(slice(y.real()), bits, half);
    int_to_bits(slice(y.imag()), bits + half, half);
}

}  // namespace musched
