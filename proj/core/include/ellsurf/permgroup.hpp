#pragma once
// Finite group utilities on composition tables: conjugacy classes, centers,
// derived series, abelian invariants, and fingerprint-based recognition of
// the small groups appearing in the fixtures.

#include <cstdint>
#include <string>
#include <vector>

namespace ellsurf {

using GroupTable = std::vector<std::vector<size_t>>;  // t[a][b] = a o b

size_t group_identity(const GroupTable& t);
std::vector<size_t> element_orders(const GroupTable& t);
size_t element_inverse(const GroupTable& t, size_t a);
std::vector<std::vector<size_t>> conjugacy_classes(const GroupTable& t);
std::vector<size_t> group_center(const GroupTable& t);
std::vector<size_t> derived_subgroup(const GroupTable& t);
bool group_abelian(const GroupTable& t);
// invariant-factor decomposition of an abelian group, e.g. "C2 x C6"
std::string abelian_structure(const GroupTable& t);

// name well-known groups by fingerprint (order, element-order histogram,
// center size, class sizes); falls back to "group of order N"
std::string recognize_group_by_table(const GroupTable& t);

// subgroup closure of the given generators (indices), as element set
std::vector<size_t> subgroup_closure(const GroupTable& t, const std::vector<size_t>& gens);

}  // namespace ellsurf
