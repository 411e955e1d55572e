#include "longmem/spectrum.hpp"

#include "longmem/errors.hpp"
#include "longmem/series.hpp"

#include <cmath>
#include <complex>

namespace longmem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool is_power_of_two(std::size_t n) {
    return n > 0 && (n & (n - 1)) == 0;
}

void fft_radix2(std::vector<double>& re, std::vector<double>& im,
                bool inverse) {
    const std::size_t n = re.size();
    if (!is_power_of_two(n) || im.size() != n)
        throw numeric_error("fft_radix2: length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) *
                           (inverse ? 1.0 : -1.0);
        const double wr = std::cos(ang), wi = std::sin(ang);
        for (std::size_t i = 0; i < n; i += len) {
            double cr = 1.0, ci = 0.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::size_t a = i + k, b = i + k + len / 2;
                const double tr = re[b] * cr - im[b] * ci;
                const double ti = re[b] * ci + im[b] * cr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
                const double ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
        }
    }
    if (inverse) {
        for (std::size_t i = 0; i < n; ++i) {
            re[i] /= static_cast<double>(n);
            im[i] /= static_cast<double>(n);
        }
    }
}

std::vector<double> periodogram(const std::vector<double>& x, std::size_t m) {
    const std::size_t n = x.size();
    if (n < 2) throw input_error("periodogram: series too short");
    if (m < 1 || m > n / 2)
        throw input_error("periodogram: m must lie in [1, n/2]");
    if (!is_power_of_two(n)) return periodogram_direct(x, m);

    const double mu = mean(x);
    std::vector<double> re(n), im(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) re[t] = x[t] - mu;
    fft_radix2(re, im);
    std::vector<double> I(m);
    const double scale = 1.0 / (2.0 * kPi * static_cast<double>(n));
    for (std::size_t j = 1; j <= m; ++j)
        I[j - 1] = (re[j] * re[j] + im[j] * im[j]) * scale;
    return I;
}

std::vector<double> periodogram_direct(const std::vector<double>& x,
                                       std::size_t m) {
    const std::size_t n = x.size();
    if (n < 2) throw input_error("periodogram: series too short");
    if (m < 1 || m > n / 2)
        throw input_error("periodogram: m must lie in [1, n/2]");
    const double mu = mean(x);
    std::vector<double> I(m);
    const double scale = 1.0 / (2.0 * kPi * static_cast<double>(n));
    for (std::size_t j = 1; j <= m; ++j) {
        const double w = 2.0 * kPi * static_cast<double>(j) /
                         static_cast<double>(n);
        const std::complex<double> step(std::cos(w), -std::sin(w));
        std::complex<double> rot(1.0, 0.0);
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            acc += (x[t] - mu) * rot;
            rot *= step;
        }
        I[j - 1] = std::norm(acc) * scale;
    }
    return I;
}

}  // namespace longmem
