#include "qkd/postprocessing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace qkd {

void ReconciliationModel::validate() const {
  require(efficiency_f >= 1.0 && std::isfinite(efficiency_f), Errc::domain, "reconciliation efficiency f must be >= 1");
}

QberSample estimate_qber_sample(std::span<const std::uint8_t> alice_key, std::span<const std::uint8_t> bob_key,
                                Probability fraction, Probability confidence, std::uint64_t seed) {
  require(alice_key.size() == bob_key.size(), Errc::length_mismatch, "estimate_qber_sample: key length mismatch");
  require(alice_key.size() >= 10, Errc::too_few_samples, "estimate_qber_sample: key shorter than 10 bits");
  require(fraction.value() > 0.0 && fraction.value() < 1.0, Errc::domain,
          "estimate_qber_sample: fraction must lie in (0,1)");

  const std::size_t n = alice_key.size();
  const auto k = static_cast<std::size_t>(std::ceil(fraction.value() * static_cast<double>(n)));
  require(k > 0, Errc::empty_sample, "estimate_qber_sample: empty sample");

  // Partial Fisher–Yates: the first k slots become the sample.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, Stream::sampling);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
  }

  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < k; ++i) errors += alice_key[order[i]] != bob_key[order[i]];

  QberSample out;
  out.sample_size = k;
  out.errors = errors;
  out.q_hat = static_cast<double>(errors) / static_cast<double>(k);
  out.interval = hoeffding_interval(errors, k, confidence);
  out.remaining.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  std::sort(out.remaining.begin(), out.remaining.end());
  return out;
}

std::uint64_t reconciliation_leakage(std::uint64_t n, Probability q, const ReconciliationModel& model) {
  model.validate();
  const double bits = model.efficiency_f * static_cast<double>(n) * binary_entropy(q);
  return static_cast<std::uint64_t>(std::ceil(bits));
}

ToeplitzSeed::ToeplitzSeed(Bits bits, std::size_t input_len, std::size_t output_len)
    : bits_(std::move(bits)), input_len_(input_len), output_len_(output_len) {
  require(input_len >= 1, Errc::domain, "toeplitz seed: input length must be >= 1");
  require(bits_.size() == input_len + output_len - 1, Errc::length_mismatch,
          "toeplitz seed: bit count must equal n + m - 1");
  for (auto b : bits_) require(b <= 1, Errc::domain, "toeplitz seed: bits must be 0 or 1");
}

ToeplitzSeed ToeplitzSeed::random(std::size_t input_len, std::size_t output_len, Rng& rng) {
  require(input_len >= 1, Errc::domain, "toeplitz seed: input length must be >= 1");
  Bits bits(input_len + output_len - 1);
  for (auto& b : bits) b = rng.bit();
  return {std::move(bits), input_len, output_len};
}

std::string ToeplitzSeed::to_hex() const { return bits_to_hex(bits_); }

ToeplitzSeed ToeplitzSeed::from_hex(std::string_view hex, std::size_t input_len, std::size_t output_len) {
  require(input_len >= 1, Errc::domain, "toeplitz seed: input length must be >= 1");
  return {bits_from_hex(hex, input_len + output_len - 1), input_len, output_len};
}

std::string bits_to_hex(std::span<const std::uint8_t> bits) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out((bits.size() + 3) / 4, '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      auto& c = out[i / 4];
      const int nibble = (c >= 'a' ? c - 'a' + 10 : c - '0') | (8 >> (i % 4));
      c = digits[nibble];
    }
  }
  return out;
}

Bits bits_from_hex(std::string_view hex, std::size_t bit_count) {
  require(hex.size() == (bit_count + 3) / 4, Errc::length_mismatch, "hex string length does not match bit count");
  Bits out(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) {
    const char c = hex[i / 4];
    int nibble = 0;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else fail(Errc::domain, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((nibble >> (3 - i % 4)) & 1);
  }
  return out;
}

namespace {

using Words = std::vector<std::uint64_t>;

Words pack(std::span<const std::uint8_t> bits) {
  Words w((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) w[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return w;
}

// 64 bits of `w` starting at bit `offset` (bits past the end read as zero).
std::uint64_t window(const Words& w, std::size_t offset) {
  const std::size_t word = offset / 64;
  const unsigned shift = offset % 64;
  std::uint64_t lo = word < w.size() ? w[word] >> shift : 0;
  if (shift != 0 && word + 1 < w.size()) lo |= w[word + 1] << (64 - shift);
  return lo;
}

}  // namespace

Bits toeplitz_hash(std::span<const std::uint8_t> input, const ToeplitzSeed& seed) {
  const std::size_t n = seed.input_len();
  const std::size_t m = seed.output_len();
  require(input.size() == n, Errc::length_mismatch, "toeplitz_hash: input length does not match seed");

  // Row j of T read against reversed input is the seed window [j, j + n).
  Bits reversed(input.rbegin(), input.rend());
  const Words x = pack(reversed);
  const Words s = pack(seed.bits());

  Bits out(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < x.size(); ++k) acc ^= window(s, j + 64 * k) & x[k];
    out[j] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

std::uint64_t final_key_length(const KeyAccounting& acct) {
  require(acct.phase_error.value() <= 0.5, Errc::domain, "final_key_length: phase error must be <= 0.5");
  const double protected_bits = acct.single_photon_len.value_or(static_cast<double>(acct.sifted_len));
  require(protected_bits >= 0.0, Errc::domain, "final_key_length: negative single-photon length");
  const double length = protected_bits * (1.0 - binary_entropy(acct.phase_error)) -
                        static_cast<double>(acct.leak_ec) - static_cast<double>(acct.leak_auth) -
                        2.0 * std::log2(1.0 / acct.budget.eps_sec());
  if (!(length > 0.0)) return 0;
  return std::min(acct.sifted_len, static_cast<std::uint64_t>(std::floor(length)));
}

double epsilon_total(const SecurityBudget& budget) {
  return budget.eps_sec() + budget.eps_cor() + budget.eps_pe() + budget.eps_auth();
}

}  // namespace qkd
