#include "arcparse/types.hpp"

#include <algorithm>

namespace arcparse {

std::string tree_violation(const std::vector<int>& heads) {
    const int n = static_cast<int>(heads.size());
    if (n == 0) return "empty tree";
    for (int d = 1; d <= n; ++d) {
        const int h = heads[d - 1];
        if (h < 0 || h > n) {
            return "token " + std::to_string(d) + " has head " + std::to_string(h) +
                   " outside [0, " + std::to_string(n) + "]";
        }
        if (h == d) return "token " + std::to_string(d) + " is its own head";
    }
    // Every token has in-degree one by construction, so the arc set is an
    // arborescence iff the head chain from every token reaches the root.
    std::vector<int> mark(n + 1, 0);
    for (int d = 1; d <= n; ++d) {
        int v = d;
        while (v != 0 && mark[v] == 0) {
            mark[v] = d;
            v = heads[v - 1];
        }
        if (v != 0 && mark[v] == d) {
            std::string cycle = std::to_string(v);
            for (int u = heads[v - 1]; u != v; u = heads[u - 1]) {
                cycle += ", " + std::to_string(u);
            }
            return "cycle through tokens {" + cycle + "}";
        }
    }
    return {};
}

bool is_projective(const std::vector<int>& heads) {
    const int n = static_cast<int>(heads.size());
    for (int d = 1; d <= n; ++d) {
        const int l1 = std::min(heads[d - 1], d);
        const int r1 = std::max(heads[d - 1], d);
        for (int e = d + 1; e <= n; ++e) {
            const int l2 = std::min(heads[e - 1], e);
            const int r2 = std::max(heads[e - 1], e);
            const bool crossing = (l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1);
            if (crossing) return false;
        }
    }
    return true;
}

double tree_score(const ScoreMatrix& S, const std::vector<int>& heads) {
    double total = 0.0;
    for (int d = 1; d <= static_cast<int>(heads.size()); ++d) {
        total += S.at(heads[d - 1], d);
    }
    return total;
}

}  // namespace arcparse
