#pragma once

#include <complex>
#include <vector>

namespace pmns {

// Unnormalized c2c DFT over a row-major multidimensional array.
// sign = -1: forward, sum f(x) e^{-2pi i m.x/N};  sign = +1: backward.
// Plans are cached per (dims, sign); calls are serialized internally so the
// wrapper is safe to use from concurrent contexts.
void fft(std::complex<double>* data, const std::vector<int>& dims, int sign);

inline void fft(std::vector<std::complex<double>>& data,
                const std::vector<int>& dims, int sign) {
  fft(data.data(), dims, sign);
}

}  // namespace pmns
