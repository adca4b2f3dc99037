#include "rkstab/catalog.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rkstab {

namespace {

ButcherTableau build(const std::string& name, int s,
                     const std::vector<std::vector<const char*>>& a_rows,
                     const std::vector<const char*>& b,
                     const std::vector<const char*>& c) {
  ButcherTableau tab;
  tab.name = name;
  tab.s = s;
  tab.A = MatQ(s, s);
  for (int i = 0; i < s; ++i)
    for (size_t j = 0; j < a_rows[i].size(); ++j)
      tab.A.at(i, static_cast<int>(j)) = Rational::from_string(a_rows[i][j]);
  tab.b.resize(s);
  tab.c.resize(s);
  for (int i = 0; i < s; ++i) {
    tab.b[i] = Rational::from_string(b[i]);
    tab.c[i] = Rational::from_string(c[i]);
  }
  return tab;
}

ButcherTableau make_ssprk104() {
  ButcherTableau tab;
  tab.name = "ssprk104";
  tab.s = 10;
  tab.A = MatQ(10, 10);
  Rational sixth(1, 6), fifteenth(1, 15);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < i; ++j) {
      if (i < 5)
        tab.A.at(i, j) = sixth;
      else
        tab.A.at(i, j) = j < 5 ? fifteenth : sixth;
    }
  tab.b.assign(10, Rational(1, 10));
  tab.c.resize(10);
  for (int i = 0; i < 10; ++i) {
    Rational sum;
    for (int j = 0; j < 10; ++j) sum += tab.A.at(i, j);
    tab.c[i] = sum;
  }
  return tab;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"ssprk33",   "ssprk104",     "midpoint",         "euler",
          "paper_c4s2", "paper_c5s3",  "paper_counterex",  "paper_testmethod",
          "implicit_midpoint", "lobatto3a2"};
}

std::optional<ButcherTableau> find_catalog_method(const std::string& name) {
  if (name == "ssprk33")
    return build("ssprk33", 3, {{}, {"1"}, {"1/4", "1/4"}}, {"1/6", "1/6", "2/3"},
                 {"0", "1", "1/2"});
  if (name == "ssprk104") return make_ssprk104();
  if (name == "midpoint")
    return build("midpoint", 2, {{}, {"1/2"}}, {"0", "1"}, {"0", "1/2"});
  if (name == "euler") return build("euler", 1, {{}}, {"1"}, {"0"});
  if (name == "paper_c4s2")
    return build("paper_c4s2", 4, {{}, {"1"}, {"1", "-1"}, {"-1", "1", "1"}},
                 {"1/4", "1/4", "1/4", "1/4"}, {"0", "1", "0", "1"});
  if (name == "paper_c5s3")
    return build("paper_c5s3", 5,
                 {{}, {"1/2"}, {"1"}, {"1", "0", "-1"}, {"-3", "2", "1", "1"}},
                 {"0", "2/3", "0", "1/6", "1/6"}, {"0", "1/2", "1", "0", "1"});
  if (name == "paper_counterex")
    return build("paper_counterex", 3, {{}, {"1"}, {"1", "-1"}}, {"-1/2", "0", "3/2"},
                 {"0", "1", "0"});
  if (name == "paper_testmethod")
    return build("paper_testmethod", 3, {{}, {"3/8"}, {"-1", "2"}},
                 {"1/22", "8/11", "5/22"}, {"0", "3/8", "1"});
  if (name == "implicit_midpoint")
    return build("implicit_midpoint", 1, {{"1/2"}}, {"1"}, {"1/2"});
  if (name == "lobatto3a2")
    return build("lobatto3a2", 2, {{}, {"1/2", "1/2"}}, {"1/2", "1/2"}, {"0", "1"});
  return std::nullopt;
}

ButcherTableau resolve_method(const std::string& name_or_path) {
  if (auto tab = find_catalog_method(name_or_path)) return *tab;
  std::ifstream in(name_or_path);
  if (!in) throw std::runtime_error("unknown method '" + name_or_path +
                                    "': not a catalog name or readable file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tableau(ss.str());
}

}  // namespace rkstab
