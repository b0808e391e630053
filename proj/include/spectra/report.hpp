#pragma once

#include <string>
#include <vector>

namespace spectra {

/// One compared quantity: lhs and rhs are the two computed sides.
struct CheckRecord {
  std::string check;
  std::string degree;
  long lhs = 0;
  long rhs = 0;
  bool pass = false;
};

struct Report {
  std::string name;
  std::vector<CheckRecord> records;

  void add(std::string check, std::string degree, long lhs, long rhs) {
    records.push_back({std::move(check), std::move(degree), lhs, rhs, lhs == rhs});
  }

  /// Record with a custom verdict, for inequalities and boolean checks.
  void add(std::string check, std::string degree, long lhs, long rhs, bool pass) {
    records.push_back({std::move(check), std::move(degree), lhs, rhs, pass});
  }

  void append(const Report& other) { records.insert(records.end(), other.records.begin(), other.records.end()); }

  /// Appends with `prefix:` prepended to each degree tag.
  void append(const Report& other, const std::string& prefix) {
    for (auto r : other.records) {
      r.degree = prefix + ":" + r.degree;
      records.push_back(std::move(r));
    }
  }

  bool pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
};

}  // namespace spectra
