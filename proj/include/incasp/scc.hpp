#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace incasp {

// Strongly connected components of a directed graph given as an adjacency
// list over node indices 0..n-1. Components are emitted in reverse
// topological order of the condensation (successors before predecessors),
// with each component's node list sorted ascending.
struct SccResult {
    std::vector<std::vector<int>> components;
    std::vector<int> component_of; // node index -> index into components
};

inline SccResult strongly_connected_components(const std::vector<std::vector<int>>& adjacency) {
    const int n = static_cast<int>(adjacency.size());
    SccResult result;
    result.component_of.assign(n, -1);

    std::vector<int> index(n, -1);
    std::vector<int> lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;

    struct Frame {
        int node;
        std::size_t edge;
    };
    std::vector<Frame> frames;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            Frame& frame = frames.back();
            if (frame.edge < adjacency[frame.node].size()) {
                int next = adjacency[frame.node][frame.edge];
                ++frame.edge;
                if (index[next] == -1) {
                    index[next] = lowlink[next] = next_index++;
                    stack.push_back(next);
                    on_stack[next] = true;
                    frames.push_back({next, 0});
                } else if (on_stack[next]) {
                    lowlink[frame.node] = std::min(lowlink[frame.node], index[next]);
                }
            } else {
                int node = frame.node;
                frames.pop_back();
                if (!frames.empty()) {
                    lowlink[frames.back().node] = std::min(lowlink[frames.back().node], lowlink[node]);
                }
                if (lowlink[node] == index[node]) {
                    std::vector<int> component;
                    while (true) {
                        int member = stack.back();
                        stack.pop_back();
                        on_stack[member] = false;
                        result.component_of[member] = static_cast<int>(result.components.size());
                        component.push_back(member);
                        if (member == node) break;
                    }
                    std::sort(component.begin(), component.end());
                    result.components.push_back(std::move(component));
                }
            }
        }
    }
    return result;
}

} // namespace incasp
