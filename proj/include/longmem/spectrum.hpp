#pragma once

#include <cstddef>
#include <vector>

namespace longmem {

// Periodogram ordinates I(w_j) = |sum_t (x_t - xbar) e^{-i w_j t}|^2 / (2 pi n)
// at the Fourier frequencies w_j = 2 pi j / n, j = 1..m.
//
// Power-of-two lengths go through a radix-2 FFT; everything else through the
// direct transform. periodogram_direct is also the oracle the FFT path is
// tested against.
std::vector<double> periodogram(const std::vector<double>& x, std::size_t m);
std::vector<double> periodogram_direct(const std::vector<double>& x,
                                       std::size_t m);

// In-place radix-2 FFT of complex data stored as interleaved re/im pairs;
// n must be a power of two.
void fft_radix2(std::vector<double>& re, std::vector<double>& im,
                bool inverse = false);

bool is_power_of_two(std::size_t n);

}  // namespace longmem
