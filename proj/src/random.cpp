#include "manifit/random.hpp"

#include <cmath>
#include <numbers>

namespace manifit {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

} // namespace

std::array<std::uint32_t, 4>
Philox::block(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{ kMul0 } * ctr[0];
    const std::uint64_t p1 = std::uint64_t{ kMul1 } * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = { hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0 };
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Philox::Philox(std::uint64_t seed)
  : key_{ static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32) }
{}

void
Philox::refill()
{
  buffer_ = block(counter_, key_);
  for (auto& word : counter_) {
    if (++word != 0) {
      break;
    }
  }
  next_word_ = 0;
}

std::uint64_t
Philox::operator()()
{
  if (next_word_ > 2) {
    refill();
  }
  const std::uint64_t lo = buffer_[static_cast<std::size_t>(next_word_)];
  const std::uint64_t hi = buffer_[static_cast<std::size_t>(next_word_ + 1)];
  next_word_ += 2;
  return (hi << 32) | lo;
}

double
Philox::uniform()
{
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double
Philox::normal()
{
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = uniform_open_below();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t
mix64(std::uint64_t z)
{
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t
derive_seed(std::uint64_t parent, std::uint64_t index)
{
  return mix64(mix64(parent) ^ (index * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
}

} // namespace manifit
