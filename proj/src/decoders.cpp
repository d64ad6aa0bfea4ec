#include "arcparse/decoders.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace arcparse {

namespace {

// Large-negative mask instead of -inf so that contraction arithmetic stays
// finite. Consumed scores are assumed to be far smaller in magnitude.
constexpr double kNegInf = -1e30;

void check_length(int n, const char* who) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": sentence length must be >= 1");
}

DependencyTree heads_to_tree(const std::vector<int>& heads1 /* indexed by token id */) {
    DependencyTree tree;
    tree.heads.assign(heads1.begin() + 1, heads1.end());
    return tree;
}

// ---------------------------------------------------------------------------
// Eisner, optimized: six flat chart tables in one allocation. The complete
// tables are kept both row-major and transposed so that every inner max runs
// over two stride-1 ranges. The split-point max of the two incomplete items
// over a span is shared (the argmax r does not depend on the arc direction).
// Ties keep the first candidate in ascending-r order.
// ---------------------------------------------------------------------------

enum SpanKind : int32_t { kIncompleteRight, kIncompleteLeft, kCompleteRight, kCompleteLeft };

DependencyTree eisner_impl(const double* scores, int n) {
    const int N = n + 1;
    const std::size_t cells = static_cast<std::size_t>(N) * N;

    std::vector<double> values(6 * cells, kNegInf);
    double* ir = values.data();         // incomplete right, row-major [s][t]
    double* il_t = ir + cells;          // incomplete left, transposed  [t][s]
    double* cl = il_t + cells;          // complete left, row-major
    double* cl_t = cl + cells;          // complete left, transposed
    double* cr = cl_t + cells;          // complete right, row-major
    double* cr_t = cr + cells;          // complete right, transposed

    std::vector<int32_t> back(3 * cells, 0);
    int32_t* bi = back.data();          // shared incomplete split point
    int32_t* bcl = bi + cells;
    int32_t* bcr = bcl + cells;

    for (int i = 0; i < N; ++i) {
        cl[i * N + i] = 0.0;
        cl_t[i * N + i] = 0.0;
        cr[i * N + i] = 0.0;
        cr_t[i * N + i] = 0.0;
    }

    for (int w = 1; w <= n; ++w) {
        for (int s = 0; s + w <= n; ++s) {
            const int t = s + w;

            // max over r in [s, t) of cr[s][r] + cl[r+1][t]
            {
                const double* row = cr + static_cast<std::size_t>(s) * N;
                const double* col = cl_t + static_cast<std::size_t>(t) * N;
                double best = row[s] + col[s + 1];
                int best_r = s;
                for (int r = s + 1; r < t; ++r) {
                    const double v = row[r] + col[r + 1];
                    if (v > best) {
                        best = v;
                        best_r = r;
                    }
                }
                bi[s * N + t] = best_r;
                ir[s * N + t] = best + scores[static_cast<std::size_t>(s) * N + t];
                if (s > 0) {  // the root never takes a head
                    il_t[t * N + s] = best + scores[static_cast<std::size_t>(t) * N + s];
                }
            }

            // cl[s][t] = max over r in [s, t) of cl[s][r] + il[r][t]
            {
                const double* row = cl + static_cast<std::size_t>(s) * N;
                const double* col = il_t + static_cast<std::size_t>(t) * N;
                double best = row[s] + col[s];
                int best_r = s;
                for (int r = s + 1; r < t; ++r) {
                    const double v = row[r] + col[r];
                    if (v > best) {
                        best = v;
                        best_r = r;
                    }
                }
                cl[s * N + t] = best;
                cl_t[t * N + s] = best;
                bcl[s * N + t] = best_r;
            }

            // cr[s][t] = max over r in (s, t] of ir[s][r] + cr[r][t]
            {
                const double* row = ir + static_cast<std::size_t>(s) * N;
                const double* col = cr_t + static_cast<std::size_t>(t) * N;
                double best = row[s + 1] + col[s + 1];
                int best_r = s + 1;
                for (int r = s + 2; r <= t; ++r) {
                    const double v = row[r] + col[r];
                    if (v > best) {
                        best = v;
                        best_r = r;
                    }
                }
                cr[s * N + t] = best;
                cr_t[t * N + s] = best;
                bcr[s * N + t] = best_r;
            }
        }
    }

    std::vector<int> heads(N, 0);
    std::vector<std::array<int32_t, 3>> stack;
    stack.push_back({0, n, kCompleteRight});
    while (!stack.empty()) {
        const auto [s, t, kind] = stack.back();
        stack.pop_back();
        if (s == t) continue;
        switch (kind) {
            case kCompleteRight: {
                const int r = bcr[s * N + t];
                stack.push_back({s, r, kIncompleteRight});
                stack.push_back({r, t, kCompleteRight});
                break;
            }
            case kCompleteLeft: {
                const int r = bcl[s * N + t];
                stack.push_back({s, r, kCompleteLeft});
                stack.push_back({r, t, kIncompleteLeft});
                break;
            }
            case kIncompleteRight:
            case kIncompleteLeft: {
                if (kind == kIncompleteRight) {
                    heads[t] = s;
                } else {
                    heads[s] = t;
                }
                const int r = bi[s * N + t];
                stack.push_back({s, r, kCompleteRight});
                stack.push_back({r + 1, t, kCompleteLeft});
                break;
            }
        }
    }
    return heads_to_tree(heads);
}

// ---------------------------------------------------------------------------
// Eisner, reference: textbook chart over nested vectors, one candidate list
// materialized per item, recursive backtracking.
// ---------------------------------------------------------------------------

struct RefChartItem {
    double value = kNegInf;
    int split = -1;
};

DependencyTree eisner_reference_impl(const ScoreMatrix& S) {
    const int n = S.n;
    const int N = n + 1;
    // chart[s][t][direction][completeness]: direction 0 = left (head on the
    // right), 1 = right; completeness 0 = incomplete, 1 = complete.
    std::vector<std::vector<std::array<std::array<RefChartItem, 2>, 2>>> chart(
        N, std::vector<std::array<std::array<RefChartItem, 2>, 2>>(N));
    for (int i = 0; i < N; ++i) {
        chart[i][i][0][1].value = 0.0;
        chart[i][i][1][1].value = 0.0;
    }

    auto argmax = [](const std::vector<double>& candidates) {
        const auto it = std::max_element(candidates.begin(), candidates.end());
        return std::pair<int, double>(static_cast<int>(it - candidates.begin()), *it);
    };

    for (int w = 1; w <= n; ++w) {
        for (int s = 0; s + w <= n; ++s) {
            const int t = s + w;
            // incomplete left (arc t -> s); the root never takes a head
            if (s > 0) {
                std::vector<double> candidates;
                for (int r = s; r < t; ++r) {
                    candidates.push_back(chart[s][r][1][1].value + chart[r + 1][t][0][1].value);
                }
                const auto [idx, value] = argmax(candidates);
                chart[s][t][0][0] = {value + S.at(t, s), s + idx};
            }
            // incomplete right (arc s -> t)
            {
                std::vector<double> candidates;
                for (int r = s; r < t; ++r) {
                    candidates.push_back(chart[s][r][1][1].value + chart[r + 1][t][0][1].value);
                }
                const auto [idx, value] = argmax(candidates);
                chart[s][t][1][0] = {value + S.at(s, t), s + idx};
            }
            {
                std::vector<double> candidates;
                for (int r = s; r < t; ++r) {
                    candidates.push_back(chart[s][r][0][1].value + chart[r][t][0][0].value);
                }
                const auto [idx, value] = argmax(candidates);
                chart[s][t][0][1] = {value, s + idx};
            }
            {
                std::vector<double> candidates;
                for (int r = s + 1; r <= t; ++r) {
                    candidates.push_back(chart[s][r][1][0].value + chart[r][t][1][1].value);
                }
                const auto [idx, value] = argmax(candidates);
                chart[s][t][1][1] = {value, s + 1 + idx};
            }
        }
    }

    std::vector<int> heads(N, 0);
    std::function<void(int, int, int, int)> backtrack = [&](int s, int t, int dir, int comp) {
        if (s == t) return;
        const RefChartItem& item = chart[s][t][dir][comp];
        const int r = item.split;
        if (comp == 1) {
            if (dir == 1) {
                backtrack(s, r, 1, 0);
                backtrack(r, t, 1, 1);
            } else {
                backtrack(s, r, 0, 1);
                backtrack(r, t, 0, 0);
            }
        } else {
            if (dir == 1) {
                heads[t] = s;
            } else {
                heads[s] = t;
            }
            backtrack(s, r, 1, 1);
            backtrack(r + 1, t, 0, 1);
        }
    };
    backtrack(0, n, 1, 1);
    return heads_to_tree(heads);
}

// ---------------------------------------------------------------------------
// Chu-Liu-Edmonds, optimized: dense working matrix, iterative contraction
// with explicit frames, incremental best-incoming maintenance.
// ---------------------------------------------------------------------------

struct ContractionFrame {
    int rep = -1;
    std::vector<int> members;      // cycle nodes, members[0] == rep
    std::vector<int> cycle_head;   // head of each member inside the cycle
    std::vector<int> entry_node;   // per node id: member its arc into the cycle targets
    std::vector<int> exit_node;    // per node id: member serving the arc cycle -> node
};

void cle_core(std::vector<double>& W, int N, std::vector<int>& heads) {
    std::vector<uint8_t> active(N, 1);
    std::vector<int> best_head(N, -1);
    std::vector<double> best_score(N, kNegInf);
    std::vector<int> visited(N, 0);
    std::vector<int> cycle;
    std::vector<uint8_t> in_cycle(N, 0);
    std::vector<ContractionFrame> frames;

    auto rescan = [&](int d) {
        const double* col = W.data() + d;
        double best = -std::numeric_limits<double>::infinity();
        int best_h = -1;
        for (int h = 0; h < N; ++h) {
            if (!active[h] || h == d) continue;
            const double v = col[static_cast<std::size_t>(h) * N];
            if (v > best) {
                best = v;
                best_h = h;
            }
        }
        best_head[d] = best_h;
        best_score[d] = best;
    };

    for (int d = 1; d < N; ++d) rescan(d);

    while (true) {
        // Find one cycle in the best-incoming graph.
        std::fill(visited.begin(), visited.end(), 0);
        cycle.clear();
        for (int d = 1; d < N && cycle.empty(); ++d) {
            if (!active[d]) continue;
            int v = d;
            while (v != 0 && visited[v] == 0) {
                visited[v] = d;
                v = best_head[v];
            }
            if (v != 0 && visited[v] == d) {
                int u = v;
                do {
                    cycle.push_back(u);
                    u = best_head[u];
                } while (u != v);
            }
        }
        if (cycle.empty()) break;

        const int rep = cycle[0];
        ContractionFrame frame;
        frame.rep = rep;
        frame.members = cycle;
        frame.cycle_head.reserve(cycle.size());
        for (int v : cycle) {
            in_cycle[v] = 1;
            frame.cycle_head.push_back(best_head[v]);
        }
        frame.entry_node.assign(N, -1);
        frame.exit_node.assign(N, -1);

        // Rebuild the representative's row (arcs out of the cycle) and column
        // (arcs into the cycle, scored relative to the replaced cycle arc).
        for (int u = 0; u < N; ++u) {
            if (!active[u] || in_cycle[u]) continue;
            double best_in = -std::numeric_limits<double>::infinity();
            int best_in_v = -1;
            double best_out = -std::numeric_limits<double>::infinity();
            int best_out_v = -1;
            for (int v : cycle) {
                const double in = W[static_cast<std::size_t>(u) * N + v] - best_score[v];
                if (in > best_in) {
                    best_in = in;
                    best_in_v = v;
                }
                const double out = W[static_cast<std::size_t>(v) * N + u];
                if (out > best_out) {
                    best_out = out;
                    best_out_v = v;
                }
            }
            W[static_cast<std::size_t>(u) * N + rep] = best_in;
            frame.entry_node[u] = best_in_v;
            if (u != 0) {
                W[static_cast<std::size_t>(rep) * N + u] = best_out;
                frame.exit_node[u] = best_out_v;
            }
        }

        for (std::size_t i = 1; i < cycle.size(); ++i) active[cycle[i]] = 0;

        // Best heads stay valid except where the candidate set or the
        // representative's row changed.
        for (int d = 1; d < N; ++d) {
            if (!active[d] || d == rep) continue;
            if (in_cycle[best_head[d]]) {
                rescan(d);
            } else {
                const double v = W[static_cast<std::size_t>(rep) * N + d];
                if (v > best_score[d]) {
                    best_head[d] = rep;
                    best_score[d] = v;
                }
            }
        }
        rescan(rep);

        for (int v : cycle) in_cycle[v] = 0;
        frames.push_back(std::move(frame));
    }

    heads.assign(N, -1);
    for (int d = 1; d < N; ++d) {
        if (active[d]) heads[d] = best_head[d];
    }

    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
        const ContractionFrame& frame = *it;
        const int rep = frame.rep;
        const int h = heads[rep];
        for (std::size_t i = 0; i < frame.members.size(); ++i) {
            const int v = frame.members[i];
            active[v] = 1;
            heads[v] = frame.cycle_head[i];
        }
        heads[frame.entry_node[h]] = h;
        for (int u = 1; u < N; ++u) {
            if (!active[u] || u == rep) continue;
            if (heads[u] == rep && !std::count(frame.members.begin(), frame.members.end(), u)) {
                heads[u] = frame.exit_node[u];
            }
        }
    }
}

std::vector<double> masked_copy(const ScoreMatrix& S) {
    const int N = S.n + 1;
    std::vector<double> W(S.s);
    for (int i = 0; i < N; ++i) {
        W[static_cast<std::size_t>(i) * N + i] = kNegInf;
        W[static_cast<std::size_t>(i) * N] = kNegInf;
    }
    return W;
}

DependencyTree cle_impl(const ScoreMatrix& S, bool single_root) {
    const int N = S.n + 1;
    std::vector<double> W = masked_copy(S);
    std::vector<int> heads;
    cle_core(W, N, heads);

    if (single_root) {
        const int root_children =
            static_cast<int>(std::count(heads.begin() + 1, heads.end(), 0));
        if (root_children > 1) {
            // Re-run once per candidate root child; the unrestricted optimum
            // was infeasible, so the best restricted run wins.
            std::vector<int> best_heads;
            double best = -std::numeric_limits<double>::infinity();
            for (int r = 1; r < N; ++r) {
                std::vector<double> Wr = masked_copy(S);
                for (int d = 1; d < N; ++d) {
                    if (d != r) Wr[d] = kNegInf;  // row 0, column d
                }
                std::vector<int> candidate;
                cle_core(Wr, N, candidate);
                DependencyTree t = heads_to_tree(candidate);
                const double score = tree_score(S, t.heads);
                if (score > best) {
                    best = score;
                    best_heads = std::move(candidate);
                }
            }
            heads = std::move(best_heads);
        }
    }
    return heads_to_tree(heads);
}

// ---------------------------------------------------------------------------
// Chu-Liu-Edmonds, reference: recursive contraction over map-based adjacency
// with per-node candidate lists kept sorted by score.
// ---------------------------------------------------------------------------

using RefGraph = std::map<int, std::map<int, double>>;  // dependent -> head -> score

std::map<int, int> cle_ref_solve(const RefGraph& graph, int next_id) {
    // Greedy best incoming arc per node, selected from a sorted candidate list.
    std::map<int, int> best_head;
    for (const auto& [d, incoming] : graph) {
        std::vector<std::pair<double, int>> candidates;
        for (const auto& [h, score] : incoming) candidates.emplace_back(score, h);
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        best_head[d] = candidates.front().second;
    }

    // Look for a cycle.
    std::vector<int> cycle;
    for (const auto& [d, h] : best_head) {
        std::set<int> seen;
        int v = d;
        while (v != 0 && best_head.count(v) && !seen.count(v)) {
            seen.insert(v);
            v = best_head.at(v);
        }
        if (v != 0 && seen.count(v)) {
            int u = v;
            do {
                cycle.push_back(u);
                u = best_head.at(u);
            } while (u != v);
            break;
        }
    }
    if (cycle.empty()) return best_head;

    const std::set<int> members(cycle.begin(), cycle.end());
    const int super = next_id;

    // Contracted graph: cycle nodes replaced by one supernode. Track which
    // member realizes each arc in or out of the cycle.
    RefGraph contracted;
    std::map<int, int> entry_of;  // outside head -> member its arc enters
    std::map<int, int> exit_of;   // outside dependent -> member its arc leaves
    for (const auto& [d, incoming] : graph) {
        if (members.count(d)) continue;
        for (const auto& [h, score] : incoming) {
            if (members.count(h)) {
                auto it = contracted[d].find(super);
                if (it == contracted[d].end() || score > it->second) {
                    contracted[d][super] = score;
                    exit_of[d] = h;
                }
            } else {
                contracted[d][h] = score;
            }
        }
    }
    for (int v : cycle) {
        const double replaced = graph.at(v).at(best_head.at(v));
        for (const auto& [h, score] : graph.at(v)) {
            if (members.count(h)) continue;
            const double gain = score - replaced;
            auto it = contracted[super].find(h);
            if (it == contracted[super].end() || gain > it->second) {
                contracted[super][h] = gain;
                entry_of[h] = v;
            }
        }
    }

    std::map<int, int> solved = cle_ref_solve(contracted, next_id + 1);

    // Expand the supernode.
    std::map<int, int> result;
    const int super_head = solved.at(super);
    for (const auto& [d, h] : solved) {
        if (d == super) continue;
        result[d] = (h == super) ? exit_of.at(d) : h;
    }
    for (int v : cycle) result[v] = best_head.at(v);
    result[entry_of.at(super_head)] = super_head;
    return result;
}

DependencyTree cle_reference_impl(const ScoreMatrix& S, bool single_root) {
    const int n = S.n;
    auto solve_with_allowed_root = [&](int forced_root_child) {
        RefGraph graph;
        for (int d = 1; d <= n; ++d) {
            for (int h = 0; h <= n; ++h) {
                if (h == d) continue;
                if (h == 0 && forced_root_child != 0 && d != forced_root_child) continue;
                graph[d][h] = S.at(h, d);
            }
        }
        std::map<int, int> solved = cle_ref_solve(graph, n + 1);
        std::vector<int> heads(n + 1, 0);
        for (const auto& [d, h] : solved) heads[d] = h;
        return heads_to_tree(heads);
    };

    DependencyTree tree = solve_with_allowed_root(0);
    if (single_root) {
        const int root_children =
            static_cast<int>(std::count(tree.heads.begin(), tree.heads.end(), 0));
        if (root_children > 1) {
            DependencyTree best_tree;
            double best = -std::numeric_limits<double>::infinity();
            for (int r = 1; r <= n; ++r) {
                DependencyTree candidate = solve_with_allowed_root(r);
                const double score = tree_score(S, candidate.heads);
                if (score > best) {
                    best = score;
                    best_tree = std::move(candidate);
                }
            }
            tree = std::move(best_tree);
        }
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Brute force oracle: depth-first enumeration of head assignments in
// lexicographic order with incremental cycle (and crossing) rejection. Bound
// pruning only discards branches that provably cannot beat the incumbent, so
// the result including the lexicographic tie-break matches full enumeration.
// ---------------------------------------------------------------------------

struct BruteForceState {
    const ScoreMatrix* S = nullptr;
    int n = 0;
    bool projective = false;
    std::vector<int> heads;        // 1-based, heads[d] for d in 1..n
    std::vector<double> suffix;    // suffix[d]: max attainable score for deps >= d
    std::vector<int> best_heads;
    double best = -std::numeric_limits<double>::infinity();
};

bool creates_cycle(const BruteForceState& st, int d, int h) {
    // Walk the head chain from h through already-assigned dependents (< d);
    // a cycle through d closes exactly when the walk lands on d.
    int v = h;
    while (v != 0 && v < d) v = st.heads[v];
    return v == d;
}

bool crosses_assigned(const BruteForceState& st, int d, int h) {
    const int l1 = std::min(h, d);
    const int r1 = std::max(h, d);
    for (int e = 1; e < d; ++e) {
        const int l2 = std::min(st.heads[e], e);
        const int r2 = std::max(st.heads[e], e);
        if ((l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1)) return true;
    }
    return false;
}

void brute_force_search(BruteForceState& st, int d, double score) {
    if (d > st.n) {
        if (score > st.best) {
            st.best = score;
            st.best_heads.assign(st.heads.begin() + 1, st.heads.end());
        }
        return;
    }
    if (score + st.suffix[d] <= st.best) return;  // later ties are lex-greater
    for (int h = 0; h <= st.n; ++h) {
        if (h == d) continue;
        if (creates_cycle(st, d, h)) continue;
        if (st.projective && crosses_assigned(st, d, h)) continue;
        st.heads[d] = h;
        brute_force_search(st, d + 1, score + st.S->at(h, d));
    }
    st.heads[d] = 0;
}

}  // namespace

DependencyTree eisner(const ScoreMatrix& S) {
    check_length(S.n, "eisner");
    return eisner_impl(S.s.data(), S.n);
}

DependencyTree eisner(std::span<const double> scores, int n) {
    check_length(n, "eisner");
    if (scores.size() != static_cast<std::size_t>(n + 1) * (n + 1)) {
        throw std::invalid_argument("eisner: score buffer must be (n+1)^2");
    }
    return eisner_impl(scores.data(), n);
}

DependencyTree cle(const ScoreMatrix& S, bool single_root) {
    check_length(S.n, "cle");
    return cle_impl(S, single_root);
}

DependencyTree cle(std::span<const double> scores, int n, bool single_root) {
    check_length(n, "cle");
    if (scores.size() != static_cast<std::size_t>(n + 1) * (n + 1)) {
        throw std::invalid_argument("cle: score buffer must be (n+1)^2");
    }
    ScoreMatrix S(n);
    std::copy(scores.begin(), scores.end(), S.s.begin());
    return cle_impl(S, single_root);
}

DependencyTree eisner_reference(const ScoreMatrix& S) {
    check_length(S.n, "eisner_reference");
    return eisner_reference_impl(S);
}

DependencyTree cle_reference(const ScoreMatrix& S, bool single_root) {
    check_length(S.n, "cle_reference");
    return cle_reference_impl(S, single_root);
}

BruteForceResult brute_force_best(const ScoreMatrix& S, bool projective_only) {
    check_length(S.n, "brute_force_best");
    if (S.n > 8) throw std::invalid_argument("brute_force_best: enumeration bound is n <= 8");
    BruteForceState st;
    st.S = &S;
    st.n = S.n;
    st.projective = projective_only;
    st.heads.assign(S.n + 1, 0);
    st.suffix.assign(S.n + 2, 0.0);
    for (int d = S.n; d >= 1; --d) {
        double colmax = -std::numeric_limits<double>::infinity();
        for (int h = 0; h <= S.n; ++h) {
            if (h != d) colmax = std::max(colmax, S.at(h, d));
        }
        st.suffix[d] = st.suffix[d + 1] + colmax;
    }
    brute_force_search(st, 1, 0.0);
    return {st.best_heads, st.best};
}

DecoderFn decoder_by_name(const std::string& name) {
    if (name == "eisner") return [](const ScoreMatrix& S) { return eisner(S); };
    if (name == "cle") return [](const ScoreMatrix& S) { return cle(S); };
    if (name == "eisner-reference") {
        return [](const ScoreMatrix& S) { return eisner_reference(S); };
    }
    if (name == "cle-reference") return [](const ScoreMatrix& S) { return cle_reference(S); };
    throw std::invalid_argument("unknown decoder '" + name + "' (known: eisner, cle, " +
                                "eisner-reference, cle-reference)");
}

std::vector<std::string> decoder_names() {
    return {"eisner", "cle", "eisner-reference", "cle-reference"};
}

}  // namespace arcparse
