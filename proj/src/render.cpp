#include "slicecalc/sss.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace slicecalc {

namespace {

struct Bounds {
  Int xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool empty = true;
};

Bounds bounds_of(const Chart& chart) {
  Bounds b;
  for (const auto& c : chart.cells) {
    if (b.empty) {
      b = {c.x, c.x, c.y, c.y, false};
      continue;
    }
    b.xmin = std::min(b.xmin, c.x);
    b.xmax = std::max(b.xmax, c.x);
    b.ymin = std::min(b.ymin, c.y);
    b.ymax = std::max(b.ymax, c.y);
  }
  return b;
}

std::string chart_title(const Chart& chart) {
  return "Sigma^" + std::to_string(chart.source.degree) + " H(" +
         chart.source.coeff + ") over " + group_name(chart.source.group);
}

std::string differential_line(const Differential& d) {
  std::string s = "d" + std::to_string(d.r) + " (" +
                  std::to_string(d.from.first) + "," +
                  std::to_string(d.from.second) + ") -> (" +
                  std::to_string(d.to.first) + "," +
                  std::to_string(d.to.second) + ") f2[";
  for (std::size_t i = 0; i < d.rank_transferred.f2.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(d.rank_transferred.f2[i]);
  }
  return s + "]";
}

std::string render_text(const Chart& chart) {
  std::ostringstream os;
  os << "chart " << chart_title(chart) << "\n\n";
  Bounds b = bounds_of(chart);
  if (b.empty) {
    os << "  (empty)\n";
  } else {
    os << "  " << std::setw(5) << "y\\x";
    for (Int x = b.xmin; x <= b.xmax; ++x) os << std::setw(4) << x;
    os << "\n";
    for (Int y = b.ymax; y >= b.ymin; --y) {
      os << "  " << std::setw(5) << y;
      for (Int x = b.xmin; x <= b.xmax; ++x) {
        const Cell* c = chart.at(x, y);
        os << std::setw(4) << (c ? std::string(1, cell_symbol(*c)) : ".");
      }
      os << "\n";
    }
  }
  if (!chart.abutment.empty()) {
    os << "\nabutment:\n";
    for (const auto& [col, name] : chart.abutment)
      os << "  pi_" << col << " = " << name << "\n";
  }
  if (!chart.differentials.empty()) {
    os << "\ndifferentials:\n";
    for (const auto& d : chart.differentials)
      os << "  " << differential_line(d) << "\n";
  }
  return os.str();
}

// Symbol shapes as polygon offsets around the cell center.
const std::vector<std::pair<int, int>> kSquare = {
    {-7, -7}, {7, -7}, {7, 7}, {-7, 7}};
const std::vector<std::pair<int, int>> kPentagon = {
    {0, -7}, {7, -2}, {4, 6}, {-4, 6}, {-7, -2}};
const std::vector<std::pair<int, int>> kTrapezium = {
    {-7, 5}, {7, 5}, {4, -5}, {-4, -5}};
const std::vector<std::pair<int, int>> kTriangle = {{0, -7}, {7, 5}, {-7, 5}};
const std::vector<std::pair<int, int>> kDiamond = {
    {0, -8}, {8, 0}, {0, 8}, {-8, 0}};

void svg_polygon(std::ostringstream& os,
                 const std::vector<std::pair<int, int>>& shape, Int cx,
                 Int cy, bool filled) {
  os << "  <polygon points=\"";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ' ';
    os << cx + shape[i].first << ',' << cy + shape[i].second;
  }
  os << "\" fill=\"" << (filled ? "black" : "white")
     << "\" stroke=\"black\"/>\n";
}

void svg_cell(std::ostringstream& os, const Cell& cell, Int cx, Int cy) {
  char sym = cell_symbol(cell);
  switch (sym) {
    case '#':
      svg_polygon(os, kSquare, cx, cy, true);
      return;
    case 'o':
      svg_polygon(os, kSquare, cx, cy, false);
      return;
    case 'P':
      svg_polygon(os, kPentagon, cx, cy, true);
      return;
    case 'p':
      svg_polygon(os, kPentagon, cx, cy, false);
      return;
    case 'T':
      svg_polygon(os, kTrapezium, cx, cy, true);
      return;
    case 't':
      svg_polygon(os, kTrapezium, cx, cy, false);
      return;
    case 'm':
      svg_polygon(os, kTriangle, cx, cy, true);
      return;
    case 'v':
      svg_polygon(os, kTriangle, cx, cy, false);
      return;
    case 'F':
      svg_polygon(os, kDiamond, cx, cy, true);
      return;
    case 'f':
      svg_polygon(os, kDiamond, cx, cy, false);
      return;
    default:
      break;
  }
  if (sym >= '1' && sym <= '9') {
    os << "  <circle cx=\"" << cx << "\" cy=\"" << cy
       << "\" r=\"9\" fill=\"white\" stroke=\"black\"/>\n"
       << "  <text x=\"" << cx << "\" y=\"" << cy + 4
       << "\" font-size=\"11\" text-anchor=\"middle\">" << sym
       << "</text>\n";
    return;
  }
  os << "  <text x=\"" << cx << "\" y=\"" << cy + 5
     << "\" font-size=\"14\" text-anchor=\"middle\">" << sym << "</text>\n";
}

std::string render_svg(const Chart& chart) {
  const Int unit = 40, margin = 60;
  Bounds b = bounds_of(chart);
  if (b.empty) b = {0, 0, 0, 0, false};
  Int w = 2 * margin + (b.xmax - b.xmin) * unit;
  Int h = 2 * margin + (b.ymax - b.ymin) * unit;
  auto px = [&](Int x) { return margin + (x - b.xmin) * unit; };
  auto py = [&](Int y) { return margin + (b.ymax - y) * unit; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
     << "\">\n";
  os << "  <title>" << chart_title(chart) << "</title>\n";
  os << "  <defs>\n"
        "    <marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" "
        "refX=\"7\" refY=\"3\" orient=\"auto\">\n"
        "      <path d=\"M0,0 L7,3 L0,6\" fill=\"none\" "
        "stroke=\"black\"/>\n"
        "    </marker>\n"
        "  </defs>\n";
  for (Int x = b.xmin; x <= b.xmax; ++x) {
    os << "  <line x1=\"" << px(x) << "\" y1=\"" << py(b.ymax) - unit / 2
       << "\" x2=\"" << px(x) << "\" y2=\"" << py(b.ymin) + unit / 2
       << "\" stroke=\"#dddddd\"/>\n";
    os << "  <text x=\"" << px(x) << "\" y=\"" << py(b.ymin) + unit - 5
       << "\" font-size=\"11\" text-anchor=\"middle\">" << x << "</text>\n";
  }
  for (Int y = b.ymin; y <= b.ymax; ++y) {
    os << "  <line x1=\"" << px(b.xmin) - unit / 2 << "\" y1=\"" << py(y)
       << "\" x2=\"" << px(b.xmax) + unit / 2 << "\" y2=\"" << py(y)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "  <text x=\"" << px(b.xmin) - unit + 5 << "\" y=\"" << py(y) + 4
       << "\" font-size=\"11\" text-anchor=\"start\">" << y << "</text>\n";
  }
  for (const auto& d : chart.differentials) {
    os << "  <line x1=\"" << px(d.from.first) << "\" y1=\""
       << py(d.from.second) - 10 << "\" x2=\"" << px(d.to.first) << "\" y2=\""
       << py(d.to.second) + 12 << "\" stroke=\"black\" "
          "marker-end=\"url(#arrow)\"/>\n";
  }
  for (const auto& c : chart.cells) svg_cell(os, c, px(c.x), py(c.y));
  os << "</svg>\n";
  return os.str();
}

}  // namespace

char cell_symbol(const Cell& cell) {
  if (cell.entry.empty()) return '?';
  if (cell.entry.size() > 1) return '*';
  const FPiece& p = cell.entry.front();
  if (p.name == "g")
    return p.mult >= 1 && p.mult <= 9 ? static_cast<char>('0' + p.mult) : '*';
  if (p.mult != 1) return '*';
  if (p.name == "Z") return '#';
  if (p.name == "Z*") return 'o';
  if (p.name == "phi*F") return 'P';
  if (p.name == "phi*F*") return 'p';
  if (p.name == "mg") return 'T';
  if (p.name == "mg*") return 't';
  if (p.name == "m") return 'm';
  if (p.name == "m*") return 'v';
  if (p.name == "F") return 'F';
  if (p.name == "F*") return 'f';
  return '?';
}

std::string render_chart(const Chart& chart, const std::string& format) {
  if (format == "text") return render_text(chart);
  if (format == "svg") return render_svg(chart);
  throw std::invalid_argument("unknown chart format '" + format + "'");
}

std::string chart_to_json(const Chart& chart) {
  nlohmann::json j;
  j["source"] = {{"group", chart.source.group == GroupId::K4 ? "K" : "C2"},
                 {"coeff", chart.source.coeff},
                 {"degree", chart.source.degree}};
  j["abutment"] = nlohmann::json::object();
  for (const auto& [col, name] : chart.abutment)
    j["abutment"][std::to_string(col)] = name;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : chart.cells) {
    j["cells"].push_back({{"x", c.x},
                          {"y", c.y},
                          {"slice_level", c.slice_level},
                          {"entry", fsum_to_string(c.entry)},
                          {"free", c.ranks.free},
                          {"f2", c.ranks.f2},
                          {"z4", c.ranks.z4}});
  }
  j["differentials"] = nlohmann::json::array();
  for (const auto& d : chart.differentials) {
    j["differentials"].push_back(
        {{"r", d.r},
         {"from", {d.from.first, d.from.second}},
         {"to", {d.to.first, d.to.second}},
         {"f2", d.rank_transferred.f2}});
  }
  return j.dump(1);
}

}  // namespace slicecalc
