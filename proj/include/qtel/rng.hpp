#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>

namespace qtel {

// Philox4x64-10 counter-based generator (key = (seed, stream id)).
// Counter-based means a stream is a pure function of (key, block index):
// derived substreams need no state hand-off, and parallel scans stay
// reproducible for any worker count.  The raw 64-bit output sequence is
// validated against frozen numpy.random.Philox vectors in the test suite.
std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           std::uint64_t key0, std::uint64_t key1);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), id_(stream_id) {}

  std::uint64_t next_u64();

  // [0, 1), 53-bit resolution
  double uniform();
  // (0, 1]; safe as a log() argument
  double uniform_pos();
  // standard normal via Box-Muller; second variate cached
  double gaussian();
  // re and im independent standard normals
  std::complex<double> complex_normal();

  // Independent stream derived from (this stream id, child index); stable
  // across runs and thread counts.
  RandomStream substream(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return id_; }

  static std::string_view algorithm_id();

 private:
  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qtel
