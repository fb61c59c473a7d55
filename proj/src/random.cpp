#include "trivirus/random.hpp"

namespace trivirus {
namespace {

using uint128 = Pcg64::uint128;

constexpr uint128 kMultiplier =
    (static_cast<uint128>(0x2360ED051FC65DA4ULL) << 64) | 0x4385DF649FCCF645ULL;

std::uint64_t rotr(std::uint64_t value, unsigned rot) {
    return (value >> rot) | (value << ((64u - rot) & 63u));
}

} // namespace

Pcg64::Pcg64(std::uint64_t seed, std::uint64_t stream)
    : increment_((static_cast<uint128>(stream) << 1) | 1u) {
    (*this)();
    state_ += seed;
    (*this)();
}

Pcg64::result_type Pcg64::operator()() {
    state_ = state_ * kMultiplier + increment_;
    const auto high = static_cast<std::uint64_t>(state_ >> 64);
    const auto low = static_cast<std::uint64_t>(state_);
    return rotr(high ^ low, static_cast<unsigned>(state_ >> 122));
}

double Pcg64::uniform() {
    // Midpoint of one of 2^53 equal cells, hence never 0 or 1.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace trivirus
