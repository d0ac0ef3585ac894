#ifndef SONMAB_COMBINATORICS_HPP
#define SONMAB_COMBINATORICS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sonmab {

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// All k-subsets of {0..n-1} in lexicographic order. The position of a subset
// in this list is its action index everywhere in the library; tie-breaking
// rules depend on this ordering being stable.
inline std::vector<std::vector<int>> k_subsets(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("k_subsets: bad k");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    for (;;) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

// Odometer over mixed radices; visit(digits) for every tuple. Used by the
// brute-force oracles to walk product action spaces.
template <typename F>
void for_each_tuple(const std::vector<std::size_t>& radices, F&& visit) {
    std::vector<std::size_t> digits(radices.size(), 0);
    for (const auto r : radices)
        if (r == 0) return;
    for (;;) {
        visit(digits);
        std::size_t i = 0;
        while (i < digits.size()) {
            if (++digits[i] < radices[i]) break;
            digits[i] = 0;
            ++i;
        }
        if (i == digits.size()) break;
    }
}

}  // namespace sonmab

#endif
