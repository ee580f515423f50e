#ifndef METASTAB_INTERNAL_SCC_HPP
#define METASTAB_INTERNAL_SCC_HPP

#include <algorithm>
#include <vector>

namespace metastab::internal {

// Iterative Tarjan. Returns the component id of each node; ids are assigned
// in reverse topological order of the condensation (sinks get low ids).
inline int strongly_connected_components(const std::vector<std::vector<int>>& adj,
                                         std::vector<int>& component_of) {
  const int n = static_cast<int>(adj.size());
  component_of.assign(n, -1);
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  int components = 0;

  struct Frame {
    int node;
    size_t edge;
  };
  std::vector<Frame> call_stack;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call_stack.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      int v = frame.node;
      if (frame.edge < adj[v].size()) {
        int w = adj[v][frame.edge++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        if (lowlink[v] == index[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component_of[w] = components;
            if (w == v) break;
          }
          ++components;
        }
        call_stack.pop_back();
        if (!call_stack.empty()) {
          int parent = call_stack.back().node;
          lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
        }
      }
    }
  }
  return components;
}

}  // namespace metastab::internal

#endif
