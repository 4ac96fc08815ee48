#include "polyserendip/index_sets.hpp"

#include "polyserendip/error.hpp"

#include <algorithm>

namespace polyserendip {

std::vector<IndexPair> IndexSets::ordered() const
{
    std::vector<IndexPair> out;
    out.reserve(total());
    out.insert(out.end(), V.begin(), V.end());
    out.insert(out.end(), E.begin(), E.end());
    out.insert(out.end(), D.begin(), D.end());
    return out;
}

std::size_t IndexSets::column(int a, int b) const
{
    if (a < 0 || b < 0 || a >= n || b >= n) {
        throw InvalidInput("index pair out of range");
    }
    return position[static_cast<std::size_t>(a * n + b)];
}

IndexSets index_sets(int n)
{
    if (n < 3) {
        throw InvalidInput("index sets need n >= 3");
    }
    IndexSets s;
    s.n = n;
    for (int a = 0; a < n; ++a) {
        s.V.push_back({a, a});
    }
    for (int a = 0; a < n; ++a) {
        const int b = (a + 1) % n;
        s.E.push_back({std::min(a, b), std::max(a, b)});
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 2; b < n; ++b) {
            if (!(a == 0 && b == n - 1)) {
                s.D.push_back({a, b});
            }
        }
    }
    s.position.assign(static_cast<std::size_t>(n * n), 0);
    const auto all = s.ordered();
    for (std::size_t c = 0; c < all.size(); ++c) {
        s.position[static_cast<std::size_t>(all[c].a * n + all[c].b)] = c;
        s.position[static_cast<std::size_t>(all[c].b * n + all[c].a)] = c;
    }
    return s;
}

} // namespace polyserendip
