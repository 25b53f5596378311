#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

#include "slicecalc/mackey.hpp"

namespace slicecalc {

const char* embedded_catalog_json();  // defined in the generated catalog_data.cpp

namespace {

struct CatalogData {
  std::map<std::string, MackeyFunctor> c2, k4;
  std::string source;
};

void load_side(const nlohmann::json& side, GroupId g,
               std::map<std::string, MackeyFunctor>& out) {
  for (auto it = side.begin(); it != side.end(); ++it) {
    MackeyFunctor m = it.value().get<MackeyFunctor>();
    if (m.name.empty()) m.name = it.key();
    if (m.group != g)
      throw std::runtime_error("catalog entry " + it.key() + " declared under the wrong group");
    auto errs = check_axioms(m);
    if (!errs.empty())
      throw std::runtime_error("catalog entry " + group_name(g) + "/" + it.key() +
                               " invalid: " + errs[0]);
    out.emplace(it.key(), std::move(m));
  }
}

CatalogData load() {
  nlohmann::json j;
  CatalogData d;
  if (const char* env = std::getenv("SLICECALC_CATALOG"); env && *env) {
    std::ifstream f(env);
    if (!f) throw std::runtime_error(std::string("cannot open catalog file ") + env);
    f >> j;
    d.source = env;
  } else {
    j = nlohmann::json::parse(embedded_catalog_json());
    d.source = "embedded";
  }
  load_side(j.at("C2"), GroupId::C2, d.c2);
  load_side(j.at("K4"), GroupId::K4, d.k4);
  return d;
}

const CatalogData& data() {
  static const CatalogData d = load();
  return d;
}

}  // namespace

namespace {

// Accept the starless spellings of the inflated-functor names.
std::string normalize_name(const std::string& name) {
  if (name == "phiF") return "phi*F";
  if (name == "phiF*") return "phi*F*";
  if (name == "phif") return "phi*f";
  return name;
}

}  // namespace

const MackeyFunctor& catalog(GroupId g, const std::string& name) {
  const auto& m = g == GroupId::K4 ? data().k4 : data().c2;
  auto it = m.find(normalize_name(name));
  if (it == m.end())
    throw std::out_of_range("no catalog diagram named '" + name + "' over " + group_name(g));
  return it->second;
}

std::vector<std::string> catalog_names(GroupId g) {
  const auto& m = g == GroupId::K4 ? data().k4 : data().c2;
  std::vector<std::string> names;
  names.reserve(m.size());
  for (const auto& [k, v] : m) names.push_back(k);
  return names;
}

bool catalog_has(GroupId g, const std::string& name) {
  const auto& m = g == GroupId::K4 ? data().k4 : data().c2;
  return m.count(normalize_name(name)) != 0;
}

std::string catalog_source() { return data().source; }

}  // namespace slicecalc
