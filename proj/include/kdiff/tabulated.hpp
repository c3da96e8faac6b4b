#pragma once

// Lookup-table backend. Each table is indexed by the raw bits of one b-bit subword
// (unary instructions) or the concatenation of two subwords (binary instructions)
// and stores the word-parallel result on the same bits.

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "kdiff/instrset.hpp"
#include "kdiff/labeling.hpp"

namespace kdiff {

enum class TableKind : std::uint8_t { sort, merge, zip, unzip, map_sorted };

const char* table_kind_name(TableKind k);

struct TableSpec {
  TableKind kind;
  unsigned w1 = 0, w2 = 0;  // field widths (w2 only for zip, unzip, map_sorted)
  unsigned fields = 0;      // fields per subword operand
  unsigned index_bits = 0;  // b or 2b
  unsigned out_bytes = 0;   // 1, 2, 4 or 8
  std::string label() const;
  std::uint64_t bytes() const { return (std::uint64_t(1) << index_bits) * out_bytes; }
};

class Table {
 public:
  Table(const TableSpec& spec, std::vector<std::uint8_t> data);
  const TableSpec& spec() const { return spec_; }
  std::uint64_t at(std::uint64_t index) const;
  const std::vector<std::uint8_t>& data() const { return data_; }

 private:
  TableSpec spec_;
  std::vector<std::uint8_t> data_;
};

inline constexpr std::uint64_t default_table_budget = 512ull << 20;

class TableSet {
 public:
  // Tables for widths f and 2f: sort, merge, zip(f,f), unzip(f,f), map_sorted(f,f).
  // Throws BudgetError naming the first table that would exceed the budget.
  static std::shared_ptr<const TableSet> build(unsigned b, unsigned f,
                                               std::uint64_t budget = default_table_budget);
  // the tables build() would create, without building them
  static std::vector<TableSpec> plan(unsigned b, unsigned f);

  // KDIF cache file. load returns null when the file is absent or does not match (b, f).
  void save(const std::string& path) const;
  static std::shared_ptr<const TableSet> load(const std::string& path, unsigned b, unsigned f);

  unsigned bits() const { return b_; }
  unsigned width() const { return f_; }
  std::uint64_t bytes() const;
  const std::vector<Table>& tables() const { return tables_; }
  const Table* find(TableKind kind, unsigned w1, unsigned w2 = 0) const;

 private:
  unsigned b_ = 0, f_ = 0;
  std::vector<Table> tables_;
};

// Process-wide cache of table sets keyed by (b, f). A non-empty cache path is read
// before building and written after.
std::shared_ptr<const TableSet> shared_tables(unsigned b, unsigned f, std::uint64_t budget = default_table_budget,
                                              const std::string& cache_path = "");

// Sparse nca table over given label pairs, keyed by the p sublabels.
class LncaTable {
 public:
  LncaTable() = default;
  LncaTable(const NcaLabeling& lab, const std::vector<int>& left, const std::vector<int>& right);
  const Label* find(std::uint64_t px, std::uint64_t py) const;
  std::size_t size() const { return map_.size(); }
  unsigned width() const { return c_; }

 private:
  struct Hash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
      return std::hash<std::uint64_t>()(k.first * 0x9e3779b97f4a7c15ull ^ k.second);
    }
  };
  unsigned c_ = 0;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Label, Hash> map_;
};

// Calls covered by a table are answered by lookup (one word op per lookup);
// the rest fall back to the word-parallel kernels.
class TabulatedBackend : public InstructionBackend {
 public:
  explicit TabulatedBackend(std::shared_ptr<const TableSet> tables, const LncaTable* lnca = nullptr);

  const char* name() const override { return "tabulated"; }
  unsigned sort_block(unsigned f) const override;
  unsigned merge_block(unsigned f) const override;
  unsigned zip_block(unsigned fx, unsigned fy) const override;
  unsigned unzip_block(unsigned fx, unsigned fy) const override;
  unsigned map_block(unsigned kf, unsigned vf) const override;

  u128 sort(u128 x, unsigned n, unsigned f) const override;
  u128 merge(u128 x, unsigned nx, u128 y, unsigned ny, unsigned f) const override;
  u128 zip(u128 x, unsigned fx, u128 y, unsigned fy, unsigned n) const override;
  std::pair<u128, u128> unzip(u128 z, unsigned fx, unsigned fy, unsigned n) const override;
  u128 map_sorted(u128 g, unsigned u, u128 x, unsigned n, unsigned kf, unsigned vf) const override;
  instr::Label3 lnca(const instr::Label3& x, const instr::Label3& y, unsigned n, unsigned c) const override;

  std::uint64_t hits() const { return hits_; }
  std::uint64_t fallbacks() const { return fallbacks_; }
  const TableSet& tables() const { return *tables_; }

 private:
  const Table* lookup_table(TableKind kind, unsigned w1, unsigned w2 = 0) const;

  std::shared_ptr<const TableSet> tables_;
  const LncaTable* lnca_;
  mutable std::uint64_t hits_ = 0, fallbacks_ = 0;
};

}  // namespace kdiff
