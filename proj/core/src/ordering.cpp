#include <algorithm>
#include <vector>

#include "spectra/precond.hpp"

namespace spectra {

namespace {

struct LevelStructure {
    std::vector<std::size_t> order;  // Cuthill-McKee order of the component
    std::size_t depth = 0;
    std::size_t far_node = 0;  // minimum-degree node of the last level
};

// Breadth-first sweep from `root`, visiting neighbours by increasing degree.
// `mark` entries equal to `epoch` denote visited nodes.
LevelStructure sweep_from(const CsrMatrix& a, const std::vector<std::size_t>& degree, std::size_t root,
                          std::vector<unsigned>& mark, unsigned epoch) {
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    LevelStructure out;
    std::vector<std::size_t> frontier{root};
    std::vector<std::size_t> next;
    std::vector<std::size_t> nbrs;
    mark[root] = epoch;
    while (!frontier.empty()) {
        out.far_node = *std::min_element(frontier.begin(), frontier.end(),
                                         [&](std::size_t x, std::size_t y) { return degree[x] < degree[y]; });
        next.clear();
        for (std::size_t v : frontier) {
            out.order.push_back(v);
            nbrs.clear();
            for (std::size_t p = rp[v]; p < rp[v + 1]; ++p) {
                const std::size_t w = ci[p];
                if (mark[w] != epoch) {
                    mark[w] = epoch;
                    nbrs.push_back(w);
                }
            }
            std::stable_sort(nbrs.begin(), nbrs.end(),
                             [&](std::size_t x, std::size_t y) { return degree[x] < degree[y]; });
            next.insert(next.end(), nbrs.begin(), nbrs.end());
        }
        if (!next.empty()) {
            ++out.depth;
        }
        std::swap(frontier, next);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> reverse_cuthill_mckee(const CsrMatrix& a) {
    const std::size_t n = a.size();
    const auto rp = a.row_ptr();
    std::vector<std::size_t> degree(n);
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = rp[i + 1] - rp[i];
    }
    std::vector<std::size_t> seeds(n);
    for (std::size_t i = 0; i < n; ++i) {
        seeds[i] = i;
    }
    std::stable_sort(seeds.begin(), seeds.end(), [&](std::size_t x, std::size_t y) { return degree[x] < degree[y]; });

    std::vector<unsigned> mark(n, 0);
    std::vector<bool> placed(n, false);
    unsigned epoch = 0;
    std::vector<std::size_t> order;
    order.reserve(n);

    for (std::size_t seed : seeds) {
        if (placed[seed]) {
            continue;
        }
        // pseudo-peripheral root: restart from the far end while the level structure deepens
        LevelStructure best = sweep_from(a, degree, seed, mark, ++epoch);
        for (int tries = 0; tries < 8; ++tries) {
            LevelStructure trial = sweep_from(a, degree, best.far_node, mark, ++epoch);
            if (trial.depth <= best.depth) {
                break;
            }
            best = std::move(trial);
        }
        for (std::size_t v : best.order) {
            placed[v] = true;
            order.push_back(v);
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

}  // namespace spectra
