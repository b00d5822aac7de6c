#include "diagram.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace loc {

namespace {

std::vector<std::string> basis_names(const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::string> out;
  for (std::size_t f = 0; f < total; ++f) {
    std::string name(dims.size(), '0');
    std::size_t rest = f;
    for (std::size_t k = dims.size(); k-- > 0;) {
      name[k] = static_cast<char>('0' + rest % dims[k]);
      rest /= dims[k];
    }
    out.push_back(dims.size() == 1 && dims[0] > 10 ? std::to_string(f) : name);
  }
  return out;
}

std::string ids(const std::vector<std::size_t>& xs) {
  std::string out;
  for (auto x : xs) out += (out.empty() ? "" : ",") + std::to_string(x + 1);
  return out.empty() ? "." : out;
}

}  // namespace

Grid occupancy(const StateSet& s, const Partition& p) {
  p.validate(s.spec.parties());
  if (p.size() > 2) throw std::invalid_argument("grid needs at most two blocks, got " + p.str(s.spec));
  Grid g;
  std::vector<std::size_t> rdims = s.spec.dims_of(p.blocks[0]);
  std::vector<std::size_t> cdims = p.size() == 2 ? s.spec.dims_of(p.blocks[1]) : std::vector<std::size_t>{};
  g.row_block = s.spec.group_name(p.blocks[0]);
  g.col_block = p.size() == 2 ? s.spec.group_name(p.blocks[1]) : "";
  g.row_names = basis_names(rdims);
  g.col_names = cdims.empty() ? std::vector<std::string>{""} : basis_names(cdims);
  g.cells.assign(g.row_names.size(), std::vector<std::vector<std::size_t>>(g.col_names.size()));
  StateSet m = merge_parties(s, p);
  const std::size_t cols = g.col_names.size();
  for (std::size_t k = 0; k < m.size(); ++k) {
    g.labels.push_back(m.states[k].label);
    const Vec& v = m.vec(k);
    for (std::size_t f = 0; f < v.dim(); ++f)
      if (!v[f].is_zero()) g.cells[f / cols][f % cols].push_back(k);
  }
  return g;
}

std::string render_ascii(const Grid& g) {
  std::size_t w = 1, head = g.row_block.size();
  for (const auto& r : g.cells)
    for (const auto& c : r) w = std::max(w, ids(c).size());
  for (const auto& c : g.col_names) w = std::max(w, c.size());
  for (const auto& r : g.row_names) head = std::max(head, r.size());
  std::ostringstream out;
  auto pad = [](const std::string& x, std::size_t n) { return x + std::string(n - std::min(n, x.size()), ' '); };
  out << pad(g.row_block + (g.col_block.empty() ? "" : "\\" + g.col_block), head + 1 + g.col_block.size()) << " |";
  for (const auto& c : g.col_names) out << ' ' << pad(c, w);
  out << '\n';
  out << std::string(head + 2 + g.col_block.size(), '-') << '+'
      << std::string(g.col_names.size() * (w + 1), '-') << '\n';
  for (std::size_t i = 0; i < g.row_names.size(); ++i) {
    out << pad(g.row_names[i], head + 1 + g.col_block.size()) << " |";
    for (const auto& c : g.cells[i]) out << ' ' << pad(ids(c), w);
    out << '\n';
  }
  for (std::size_t k = 0; k < g.labels.size(); ++k) out << "  " << k + 1 << " = " << g.labels[k] << '\n';
  return out.str();
}

std::string render_svg(const Grid& g) {
  const int cell = 48, margin = 40;
  const int rows = static_cast<int>(g.row_names.size()), cols = static_cast<int>(g.col_names.size());
  const int width = margin + cols * cell + 10, height = margin + rows * cell + 10;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
  out << "<text x=\"2\" y=\"14\">" << g.row_block << (g.col_block.empty() ? "" : "|" + g.col_block) << "</text>\n";
  for (int j = 0; j < cols; ++j)
    out << "<text x=\"" << margin + j * cell + cell / 2 << "\" y=\"" << margin - 6 << "\" text-anchor=\"middle\">"
        << g.col_names[j] << "</text>\n";
  for (int i = 0; i < rows; ++i)
    out << "<text x=\"" << margin - 6 << "\" y=\"" << margin + i * cell + cell / 2 + 4 << "\" text-anchor=\"end\">"
        << g.row_names[i] << "</text>\n";
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const auto& c = g.cells[i][j];
      out << "<rect x=\"" << margin + j * cell << "\" y=\"" << margin + i * cell << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << (c.empty() ? "#ffffff" : "#dde8f5")
          << "\" stroke=\"#999999\"/>\n";
      if (!c.empty())
        out << "<text x=\"" << margin + j * cell + cell / 2 << "\" y=\"" << margin + i * cell + cell / 2 + 4
            << "\" text-anchor=\"middle\">" << ids(c) << "</text>\n";
    }
  // One outline per distinct support: the sub-blocks.
  std::map<std::vector<std::pair<int, int>>, int> blocks;
  for (std::size_t k = 0; k < g.labels.size(); ++k) {
    std::vector<std::pair<int, int>> sup;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (std::find(g.cells[i][j].begin(), g.cells[i][j].end(), k) != g.cells[i][j].end()) sup.push_back({i, j});
    if (!sup.empty()) blocks.emplace(sup, static_cast<int>(blocks.size()));
  }
  for (const auto& [sup, id] : blocks) {
    int r0 = rows, r1 = -1, c0 = cols, c1 = -1;
    for (auto [i, j] : sup) {
      r0 = std::min(r0, i), r1 = std::max(r1, i), c0 = std::min(c0, j), c1 = std::max(c1, j);
    }
    const int inset = 3 + id % 4 * 2;
    out << "<rect x=\"" << margin + c0 * cell + inset << "\" y=\"" << margin + r0 * cell + inset << "\" width=\""
        << (c1 - c0 + 1) * cell - 2 * inset << "\" height=\"" << (r1 - r0 + 1) * cell - 2 * inset
        << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace loc
