#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fieldcover::detail {

// Primal-dual blossom algorithm for maximum-weight perfect matching on a
// dense graph, O(n^3). Classic contracted-graph formulation: node ids
// 1..n are vertices, n+1..2n are blossom slots; st[] maps a node to its
// surface node, flower[] lists blossom children in cycle order, and
// flower_from[b][x] names the child of b whose subtree holds vertex x.
// Weights are doubles; slack tightness is tested against an epsilon scaled
// to the weight magnitude.
class BlossomMatching {
public:
    // weights[i][j] > 0 for i != j; even number of vertices required.
    explicit BlossomMatching(const std::vector<std::vector<double>>& weights) {
        n_ = static_cast<int>(weights.size());
        m_ = 2 * n_ + 1;
        g_.assign(static_cast<std::size_t>(m_) * m_, Edge{0, 0, 0.0});
        lab_.assign(m_, 0.0);
        match_.assign(m_, 0);
        slack_.assign(m_, 0);
        st_.assign(m_, 0);
        pa_.assign(m_, 0);
        state_.assign(m_, -1);
        vis_.assign(m_, 0);
        flower_.assign(m_, {});
        flower_from_.assign(static_cast<std::size_t>(m_) * (n_ + 1), 0);
        double w_max = 0.0;
        for (int u = 1; u <= n_; ++u) {
            for (int v = 1; v <= n_; ++v) {
                const double w = (u == v) ? 0.0 : weights[static_cast<std::size_t>(u - 1)][static_cast<std::size_t>(v - 1)];
                edge(u, v) = Edge{u, v, w};
                w_max = std::max(w_max, w);
            }
        }
        eps_ = 1e-9 * std::max(1.0, w_max);
        n_x_ = n_;
        for (int u = 0; u <= n_; ++u) st_[static_cast<std::size_t>(u)] = u;
        for (int u = 1; u <= n_; ++u) lab_[static_cast<std::size_t>(u)] = w_max;
        for (int u = 1; u <= n_; ++u) {
            for (int v = 1; v <= n_; ++v) ff(u, v) = (u == v) ? u : 0;
        }
    }

    // Runs the search; returns mate[i] (0-based) for each vertex.
    std::vector<int> solve() {
        while (run_phase()) {
        }
        std::vector<int> mate(static_cast<std::size_t>(n_), -1);
        for (int u = 1; u <= n_; ++u) {
            const int v = match_[static_cast<std::size_t>(u)];
            if (v == 0) throw std::runtime_error("BlossomMatching: no perfect matching found");
            mate[static_cast<std::size_t>(u - 1)] = v - 1;
        }
        for (int u = 0; u < n_; ++u) {
            if (mate[static_cast<std::size_t>(mate[static_cast<std::size_t>(u)])] != u) {
                throw std::runtime_error("BlossomMatching: inconsistent matching");
            }
        }
        return mate;
    }

private:
    struct Edge {
        int u, v;
        double w;
    };

    Edge& edge(int u, int v) { return g_[static_cast<std::size_t>(u) * m_ + v]; }
    int& ff(int b, int x) { return flower_from_[static_cast<std::size_t>(b) * (n_ + 1) + x]; }

    double slack_of(const Edge& e) { return lab_[static_cast<std::size_t>(e.u)] + lab_[static_cast<std::size_t>(e.v)] - 2.0 * e.w; }
    bool tight(const Edge& e) { return std::abs(slack_of(e)) <= eps_; }

    void update_slack(int u, int x) {
        if (!slack_[static_cast<std::size_t>(x)] || slack_of(edge(u, x)) < slack_of(edge(slack_[static_cast<std::size_t>(x)], x))) {
            slack_[static_cast<std::size_t>(x)] = u;
        }
    }

    void set_slack(int x) {
        slack_[static_cast<std::size_t>(x)] = 0;
        for (int u = 1; u <= n_; ++u) {
            if (edge(u, x).w > 0.0 && st_[static_cast<std::size_t>(u)] != x && state_[static_cast<std::size_t>(st_[static_cast<std::size_t>(u)])] == 0) {
                update_slack(u, x);
            }
        }
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int i : flower_[static_cast<std::size_t>(x)]) q_push(i);
        }
    }

    void set_st(int x, int b) {
        st_[static_cast<std::size_t>(x)] = b;
        if (x > n_) {
            for (int i : flower_[static_cast<std::size_t>(x)]) set_st(i, b);
        }
    }

    int get_pr(int b, int xr) {
        auto& fl = flower_[static_cast<std::size_t>(b)];
        const int pr = static_cast<int>(std::find(fl.begin(), fl.end(), xr) - fl.begin());
        if (pr % 2 == 1) {
            std::reverse(fl.begin() + 1, fl.end());
            return static_cast<int>(fl.size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[static_cast<std::size_t>(u)] = edge(u, v).v;
        if (u <= n_) return;
        const Edge e = edge(u, v);
        const int xr = ff(u, e.u);
        const int pr = get_pr(u, xr);
        auto& fl = flower_[static_cast<std::size_t>(u)];
        for (int i = 0; i < pr; ++i) set_match(fl[static_cast<std::size_t>(i)], fl[static_cast<std::size_t>(i ^ 1)]);
        set_match(xr, v);
        std::rotate(fl.begin(), fl.begin() + pr, fl.end());
    }

    void augment(int u, int v) {
        for (;;) {
            const int xnv = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(u)])];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(xnv)])]);
            u = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(xnv)])];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++timer_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[static_cast<std::size_t>(u)] == timer_) return u;
            vis_[static_cast<std::size_t>(u)] = timer_;
            u = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(u)])];
            if (u) u = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(u)])];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[static_cast<std::size_t>(b)]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[static_cast<std::size_t>(b)] = 0.0;
        state_[static_cast<std::size_t>(b)] = 0;
        match_[static_cast<std::size_t>(b)] = match_[static_cast<std::size_t>(lca)];
        auto& fl = flower_[static_cast<std::size_t>(b)];
        fl.clear();
        fl.push_back(lca);
        for (int x = u, y; x != lca; x = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(y)])]) {
            fl.push_back(x);
            fl.push_back(y = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(x)])]);
            q_push(y);
        }
        std::reverse(fl.begin() + 1, fl.end());
        for (int x = v, y; x != lca; x = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(y)])]) {
            fl.push_back(x);
            fl.push_back(y = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(x)])]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) {
            edge(b, x).w = 0.0;
            edge(x, b).w = 0.0;
        }
        for (int x = 1; x <= n_; ++x) ff(b, x) = 0;
        for (int xs : fl) {
            for (int x = 1; x <= n_x_; ++x) {
                if (edge(b, x).w == 0.0 || slack_of(edge(xs, x)) < slack_of(edge(b, x))) {
                    edge(b, x) = edge(xs, x);
                    edge(x, b) = edge(x, xs);
                }
            }
            for (int x = 1; x <= n_; ++x) {
                if (ff(xs, x)) ff(b, x) = xs;
            }
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        auto& fl = flower_[static_cast<std::size_t>(b)];
        for (int i : fl) set_st(i, i);
        const int xr = ff(b, edge(b, pa_[static_cast<std::size_t>(b)]).u);
        const int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            const int xs = fl[static_cast<std::size_t>(i)];
            const int xns = fl[static_cast<std::size_t>(i + 1)];
            pa_[static_cast<std::size_t>(xs)] = edge(xns, xs).u;
            state_[static_cast<std::size_t>(xs)] = 1;
            state_[static_cast<std::size_t>(xns)] = 0;
            slack_[static_cast<std::size_t>(xs)] = 0;
            set_slack(xns);
            q_push(xns);
        }
        state_[static_cast<std::size_t>(xr)] = 1;
        pa_[static_cast<std::size_t>(xr)] = pa_[static_cast<std::size_t>(b)];
        for (std::size_t i = static_cast<std::size_t>(pr) + 1; i < fl.size(); ++i) {
            const int xs = fl[i];
            state_[static_cast<std::size_t>(xs)] = -1;
            set_slack(xs);
        }
        st_[static_cast<std::size_t>(b)] = 0;
    }

    bool on_found_edge(const Edge& e) {
        const int u = st_[static_cast<std::size_t>(e.u)];
        const int v = st_[static_cast<std::size_t>(e.v)];
        if (state_[static_cast<std::size_t>(v)] == -1) {
            pa_[static_cast<std::size_t>(v)] = e.u;
            state_[static_cast<std::size_t>(v)] = 1;
            const int nu = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(v)])];
            slack_[static_cast<std::size_t>(v)] = 0;
            slack_[static_cast<std::size_t>(nu)] = 0;
            state_[static_cast<std::size_t>(nu)] = 0;
            q_push(nu);
        } else if (state_[static_cast<std::size_t>(v)] == 0) {
            const int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool run_phase() {
        std::fill(state_.begin(), state_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        for (int x = 1; x <= n_x_; ++x) {
            if (st_[static_cast<std::size_t>(x)] == x && !match_[static_cast<std::size_t>(x)]) {
                pa_[static_cast<std::size_t>(x)] = 0;
                state_[static_cast<std::size_t>(x)] = 0;
                q_push(x);
            }
        }
        if (q_.empty()) return false;
        for (;;) {
            while (!q_.empty()) {
                const int u = q_.front();
                q_.pop_front();
                if (state_[static_cast<std::size_t>(st_[static_cast<std::size_t>(u)])] == 1) continue;
                for (int v = 1; v <= n_; ++v) {
                    if (edge(u, v).w > 0.0 && st_[static_cast<std::size_t>(u)] != st_[static_cast<std::size_t>(v)]) {
                        if (tight(edge(u, v))) {
                            if (on_found_edge(edge(u, v))) return true;
                        } else {
                            update_slack(u, st_[static_cast<std::size_t>(v)]);
                        }
                    }
                }
            }
            double d = std::numeric_limits<double>::infinity();
            for (int b = n_ + 1; b <= n_x_; ++b) {
                if (st_[static_cast<std::size_t>(b)] == b && state_[static_cast<std::size_t>(b)] == 1) {
                    d = std::min(d, 0.5 * lab_[static_cast<std::size_t>(b)]);
                }
            }
            for (int x = 1; x <= n_x_; ++x) {
                if (st_[static_cast<std::size_t>(x)] == x && slack_[static_cast<std::size_t>(x)]) {
                    const double s = slack_of(edge(slack_[static_cast<std::size_t>(x)], x));
                    if (state_[static_cast<std::size_t>(x)] == -1) {
                        d = std::min(d, s);
                    } else if (state_[static_cast<std::size_t>(x)] == 0) {
                        d = std::min(d, 0.5 * s);
                    }
                }
            }
            if (!std::isfinite(d)) throw std::runtime_error("BlossomMatching: dual adjustment diverged");
            for (int u = 1; u <= n_; ++u) {
                const int su = st_[static_cast<std::size_t>(u)];
                if (state_[static_cast<std::size_t>(su)] == 0) {
                    if (lab_[static_cast<std::size_t>(u)] - d < -eps_) {
                        throw std::runtime_error("BlossomMatching: vertex dual exhausted (no perfect matching)");
                    }
                    lab_[static_cast<std::size_t>(u)] -= d;
                } else if (state_[static_cast<std::size_t>(su)] == 1) {
                    lab_[static_cast<std::size_t>(u)] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b) {
                if (st_[static_cast<std::size_t>(b)] == b) {
                    if (state_[static_cast<std::size_t>(b)] == 0) {
                        lab_[static_cast<std::size_t>(b)] += 2.0 * d;
                    } else if (state_[static_cast<std::size_t>(b)] == 1) {
                        lab_[static_cast<std::size_t>(b)] -= 2.0 * d;
                    }
                }
            }
            q_.clear();
            for (int x = 1; x <= n_x_; ++x) {
                if (st_[static_cast<std::size_t>(x)] == x && slack_[static_cast<std::size_t>(x)] &&
                    st_[static_cast<std::size_t>(slack_[static_cast<std::size_t>(x)])] != x &&
                    tight(edge(slack_[static_cast<std::size_t>(x)], x))) {
                    if (on_found_edge(edge(slack_[static_cast<std::size_t>(x)], x))) return true;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b) {
                if (st_[static_cast<std::size_t>(b)] == b && state_[static_cast<std::size_t>(b)] == 1 &&
                    std::abs(lab_[static_cast<std::size_t>(b)]) <= eps_) {
                    expand_blossom(b);
                }
            }
        }
    }

    int n_ = 0;
    int m_ = 0;
    int n_x_ = 0;
    double eps_ = 1e-9;
    int timer_ = 0;
    std::vector<Edge> g_;
    std::vector<double> lab_;
    std::vector<int> match_, slack_, st_, pa_, state_, vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<int> flower_from_;
    std::deque<int> q_;
};

}  // namespace fieldcover::detail

namespace fieldcover {

// Exact minimum-weight perfect matching (Edmonds blossom). `cost(i, j)` must
// be symmetric and finite; n must be even. Returns mate[i].
template <typename CostFn>
std::vector<int> minimum_weight_perfect_matching(int n, CostFn&& cost) {
    if (n % 2 != 0) throw std::invalid_argument("minimum_weight_perfect_matching: vertex count must be even");
    if (n == 0) return {};
    double w_max = 0.0;
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double c = cost(i, j);
            w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
            w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
            w_max = std::max(w_max, c);
        }
    }
    // maximize (C - cost) over perfect matchings == minimize total cost;
    // C is large enough that fuller matchings always dominate.
    const double big = w_max * (0.5 * n + 1.0) + 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = big - w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    detail::BlossomMatching solver(w);
    return solver.solve();
}

/// Deterministic nearest-free-neighbour matching; no optimality guarantee.
template <typename CostFn>
std::vector<int> greedy_perfect_matching(int n, CostFn&& cost) {
    if (n % 2 != 0) throw std::invalid_argument("greedy_perfect_matching: vertex count must be even");
    std::vector<int> mate(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (mate[static_cast<std::size_t>(i)] != -1) continue;
        int best = -1;
        double best_c = std::numeric_limits<double>::infinity();
        for (int j = i + 1; j < n; ++j) {
            if (mate[static_cast<std::size_t>(j)] != -1) continue;
            const double c = cost(i, j);
            if (c < best_c) {
                best_c = c;
                best = j;
            }
        }
        mate[static_cast<std::size_t>(i)] = best;
        mate[static_cast<std::size_t>(best)] = i;
    }
    return mate;
}

}  // namespace fieldcover
