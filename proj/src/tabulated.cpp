#include "kdiff/tabulated.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

#include "kdiff/error.hpp"

namespace kdiff {

const char* table_kind_name(TableKind k) {
  switch (k) {
    case TableKind::sort: return "sort";
    case TableKind::merge: return "merge";
    case TableKind::zip: return "zip";
    case TableKind::unzip: return "unzip";
    case TableKind::map_sorted: return "map_sorted";
  }
  return "?";
}

std::string TableSpec::label() const {
  std::string s = std::string(table_kind_name(kind)) + "(f=" + std::to_string(w1);
  if (w2) s += "," + std::to_string(w2);
  return s + ")";
}

Table::Table(const TableSpec& spec, std::vector<std::uint8_t> data) : spec_(spec), data_(std::move(data)) {
  if (data_.size() != spec_.bytes()) throw ShapeError("table " + spec_.label() + " payload has the wrong size");
}

std::uint64_t Table::at(std::uint64_t index) const {
  const std::uint8_t* p = data_.data() + index * spec_.out_bytes;
  switch (spec_.out_bytes) {
    case 1: return *p;
    case 2: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
    case 4: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
    default: { std::uint64_t v; std::memcpy(&v, p, 8); return v; }
  }
}

namespace {

constexpr std::uint16_t cache_version = 1;

unsigned out_bytes_for(unsigned bits) {
  if (bits <= 8) return 1;
  if (bits <= 16) return 2;
  if (bits <= 32) return 4;
  return 8;
}

unsigned output_bits(const TableSpec& s) {
  switch (s.kind) {
    case TableKind::sort: return s.fields * (s.w1 + 1);
    case TableKind::merge: return 2 * s.fields * (s.w1 + 1);
    case TableKind::zip: return s.fields * (s.w1 + s.w2 + 1);
    case TableKind::unzip: return s.fields * (s.w1 + 1) + s.fields * (s.w2 + 1);
    case TableKind::map_sorted: return s.fields * (s.w2 + 1);
  }
  return 64;
}

void put(std::vector<std::uint8_t>& d, std::uint64_t i, unsigned bytes, std::uint64_t v) {
  std::memcpy(d.data() + i * bytes, &v, bytes);  // little-endian host
}

std::uint64_t evaluate(const TableSpec& s, std::uint64_t idx, unsigned b) {
  const unsigned n = s.fields;
  const u128 lo = idx & ((std::uint64_t(1) << b) - 1), hi = idx >> b;
  switch (s.kind) {
    case TableKind::sort: return static_cast<std::uint64_t>(instr::sort(lo, n, s.w1));
    case TableKind::merge: return static_cast<std::uint64_t>(instr::merge(hi, n, lo, n, s.w1));
    case TableKind::zip: return static_cast<std::uint64_t>(instr::zip(hi, s.w1, lo, s.w2, n));
    case TableKind::unzip: {
      auto [x, y] = instr::unzip(lo, s.w1, s.w2, n);
      return static_cast<std::uint64_t>(x | (y << (n * (s.w1 + 1))));
    }
    case TableKind::map_sorted: return static_cast<std::uint64_t>(instr::map_sorted(hi, n, lo, n, s.w1, s.w2));
  }
  return 0;
}

Table build_table(const TableSpec& s, unsigned b) {
  std::vector<std::uint8_t> data(s.bytes());
  const std::uint64_t count = std::uint64_t(1) << s.index_bits;
  for (std::uint64_t i = 0; i < count; ++i) put(data, i, s.out_bytes, evaluate(s, i, b));
  return Table(s, std::move(data));
}

}  // namespace

std::vector<TableSpec> TableSet::plan(unsigned b, unsigned f) {
  if (b == 0 || b > 30) throw ParamError("table subword width must be in 1..30");
  if (f == 0 || f > 63) throw WidthError("table field width must be in 1..63");
  std::vector<TableSpec> out;
  auto add = [&](TableKind kind, unsigned w1, unsigned w2, unsigned fields, unsigned limit, unsigned index_bits) {
    fields = std::min(fields, limit);
    if (fields == 0) return;
    TableSpec s{kind, w1, w2, fields, index_bits, 0};
    s.out_bytes = out_bytes_for(output_bits(s));
    out.push_back(s);
  };
  const WordParallelBackend& wp = wordpar_backend();
  for (unsigned w : {f, 2 * f}) {
    if (w > 63) continue;
    add(TableKind::sort, w, 0, b / (w + 1), wp.sort_block(w), b);
    add(TableKind::merge, w, 0, b / (w + 1), wp.merge_block(w), 2 * b);
  }
  if (2 * f <= 63) {
    add(TableKind::zip, f, f, b / (f + 1), wp.zip_block(f, f), 2 * b);
    add(TableKind::unzip, f, f, b / (2 * f + 1), wp.zip_block(f, f), b);
    unsigned mb = 0;
    try {
      mb = wp.map_block(f, f);
    } catch (const WidthError&) {
    }
    add(TableKind::map_sorted, f, f, b / (2 * f + 1), mb, 2 * b);
  }
  return out;
}

std::shared_ptr<const TableSet> TableSet::build(unsigned b, unsigned f, std::uint64_t budget) {
  auto specs = plan(b, f);
  std::uint64_t used = 0;
  for (const auto& s : specs) {
    if (used + s.bytes() > budget)
      throw BudgetError("table " + s.label() + " needs " + std::to_string(s.bytes()) + " bytes; budget " +
                        std::to_string(budget) + " with " + std::to_string(used) + " already used");
    used += s.bytes();
  }
  const std::uint64_t saved = word_op_count;
  auto set = std::make_shared<TableSet>();
  set->b_ = b;
  set->f_ = f;
  for (const auto& s : specs) set->tables_.push_back(build_table(s, b));
  word_op_count = saved;
  return set;
}

std::uint64_t TableSet::bytes() const {
  std::uint64_t s = 0;
  for (const auto& t : tables_) s += t.data().size();
  return s;
}

const Table* TableSet::find(TableKind kind, unsigned w1, unsigned w2) const {
  for (const auto& t : tables_)
    if (t.spec().kind == kind && t.spec().w1 == w1 && t.spec().w2 == w2) return &t;
  return nullptr;
}

void TableSet::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write table cache " + path);
  auto le = [&](std::uint64_t v, unsigned bytes) {
    for (unsigned i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  out.write("KDIF", 4);
  le(cache_version, 2);
  le(b_, 1);
  le(f_, 1);
  for (const auto& t : tables_) le(t.data().size(), 8);
  for (const auto& t : tables_)
    out.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.data().size()));
  if (!out) throw Error("failed writing table cache " + path);
}

std::shared_ptr<const TableSet> TableSet::load(const std::string& path, unsigned b, unsigned f) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return nullptr;
  auto le = [&](unsigned bytes) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i) v |= std::uint64_t(static_cast<std::uint8_t>(in.get())) << (8 * i);
    return v;
  };
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "KDIF", 4) != 0) return nullptr;
  if (le(2) != cache_version || le(1) != b || le(1) != f) return nullptr;
  auto specs = plan(b, f);
  for (const auto& s : specs)
    if (le(8) != s.bytes()) return nullptr;
  auto set = std::make_shared<TableSet>();
  set->b_ = b;
  set->f_ = f;
  for (const auto& s : specs) {
    std::vector<std::uint8_t> data(s.bytes());
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!in) return nullptr;
    set->tables_.emplace_back(s, std::move(data));
  }
  return set;
}

std::shared_ptr<const TableSet> shared_tables(unsigned b, unsigned f, std::uint64_t budget,
                                              const std::string& cache_path) {
  struct Entry {
    std::shared_ptr<const TableSet> set;
    std::uint64_t stamp;
  };
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, Entry> cache;
  static std::uint64_t clock = 0;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({b, f});
  if (it != cache.end()) {
    it->second.stamp = ++clock;
    return it->second.set;
  }
  std::shared_ptr<const TableSet> set;
  if (!cache_path.empty()) set = TableSet::load(cache_path, b, f);
  if (!set) {
    set = TableSet::build(b, f, budget);
    if (!cache_path.empty()) set->save(cache_path);
  }
  // keep the resident sets within one budget, dropping the least recently used
  std::uint64_t total = set->bytes();
  for (const auto& [k, e] : cache) total += e.set->bytes();
  while (total > budget && !cache.empty()) {
    auto victim = std::min_element(cache.begin(), cache.end(),
                                   [](const auto& a, const auto& c) { return a.second.stamp < c.second.stamp; });
    total -= victim->second.set->bytes();
    cache.erase(victim);
  }
  cache[{b, f}] = Entry{set, ++clock};
  return set;
}

LncaTable::LncaTable(const NcaLabeling& lab, const std::vector<int>& left, const std::vector<int>& right)
    : c_(lab.width()) {
  map_.reserve(left.size() * right.size());
  for (int a : left)
    for (int b : right) {
      const Label& x = lab.label(a);
      const Label& y = lab.label(b);
      map_.emplace(std::make_pair(x.p, y.p), lnca_scalar(lab, x, y));
    }
}

const Label* LncaTable::find(std::uint64_t px, std::uint64_t py) const {
  auto it = map_.find({px, py});
  return it == map_.end() ? nullptr : &it->second;
}

TabulatedBackend::TabulatedBackend(std::shared_ptr<const TableSet> tables, const LncaTable* lnca)
    : tables_(std::move(tables)), lnca_(lnca) {
  if (!tables_) throw ParamError("tabulated backend needs a table set");
}

const Table* TabulatedBackend::lookup_table(TableKind kind, unsigned w1, unsigned w2) const {
  return tables_->find(kind, w1, w2);
}

unsigned TabulatedBackend::sort_block(unsigned f) const {
  const Table* t = lookup_table(TableKind::sort, f);
  return t ? t->spec().fields : InstructionBackend::sort_block(f);
}

unsigned TabulatedBackend::merge_block(unsigned f) const {
  const Table* t = lookup_table(TableKind::merge, f);
  return t ? t->spec().fields : InstructionBackend::merge_block(f);
}

unsigned TabulatedBackend::zip_block(unsigned fx, unsigned fy) const {
  const Table* t = lookup_table(TableKind::zip, fx, fy);
  return t ? t->spec().fields : InstructionBackend::zip_block(fx, fy);
}

unsigned TabulatedBackend::unzip_block(unsigned fx, unsigned fy) const {
  const Table* t = lookup_table(TableKind::unzip, fx, fy);
  return t ? t->spec().fields : InstructionBackend::zip_block(fx, fy);
}

unsigned TabulatedBackend::map_block(unsigned kf, unsigned vf) const {
  const Table* t = lookup_table(TableKind::map_sorted, kf, vf);
  return t ? t->spec().fields : InstructionBackend::map_block(kf, vf);
}

namespace {

bool fits(u128 v, unsigned b) { return (v >> b) == 0; }

}  // namespace

u128 TabulatedBackend::sort(u128 x, unsigned n, unsigned f) const {
  const Table* t = lookup_table(TableKind::sort, f);
  const unsigned b = tables_->bits();
  if (t && n == t->spec().fields && fits(x, b)) {
    ++hits_;
    ++word_op_count;
    return t->at(static_cast<std::uint64_t>(x));
  }
  ++fallbacks_;
  return instr::sort(x, n, f);
}

u128 TabulatedBackend::merge(u128 x, unsigned nx, u128 y, unsigned ny, unsigned f) const {
  const Table* t = lookup_table(TableKind::merge, f);
  const unsigned b = tables_->bits();
  if (t && nx == t->spec().fields && ny == nx && fits(x, b) && fits(y, b)) {
    ++hits_;
    word_op_count += 3;
    return t->at(static_cast<std::uint64_t>((x << b) | y));
  }
  ++fallbacks_;
  return instr::merge(x, nx, y, ny, f);
}

u128 TabulatedBackend::zip(u128 x, unsigned fx, u128 y, unsigned fy, unsigned n) const {
  const Table* t = lookup_table(TableKind::zip, fx, fy);
  const unsigned b = tables_->bits();
  if (t && n == t->spec().fields && fits(x, b) && fits(y, b)) {
    ++hits_;
    word_op_count += 3;
    return t->at(static_cast<std::uint64_t>((x << b) | y));
  }
  ++fallbacks_;
  return instr::zip(x, fx, y, fy, n);
}

std::pair<u128, u128> TabulatedBackend::unzip(u128 z, unsigned fx, unsigned fy, unsigned n) const {
  const Table* t = lookup_table(TableKind::unzip, fx, fy);
  if (t && n == t->spec().fields && fits(z, tables_->bits())) {
    ++hits_;
    word_op_count += 3;
    const std::uint64_t v = t->at(static_cast<std::uint64_t>(z));
    const unsigned xb = n * (fx + 1);
    return {u128(v & ((std::uint64_t(1) << xb) - 1)), u128(v >> xb)};
  }
  ++fallbacks_;
  return instr::unzip(z, fx, fy, n);
}

u128 TabulatedBackend::map_sorted(u128 g, unsigned u, u128 x, unsigned n, unsigned kf, unsigned vf) const {
  const Table* t = lookup_table(TableKind::map_sorted, kf, vf);
  const unsigned b = tables_->bits();
  if (t && u == t->spec().fields && n == u && fits(g, b) && fits(x, b)) {
    ++hits_;
    word_op_count += 3;
    return t->at(static_cast<std::uint64_t>((g << b) | x));
  }
  ++fallbacks_;
  return instr::map_sorted(g, u, x, n, kf, vf);
}

instr::Label3 TabulatedBackend::lnca(const instr::Label3& x, const instr::Label3& y, unsigned n, unsigned c) const {
  if (lnca_ && lnca_->width() == c) {
    const unsigned w = c + 1;
    const std::uint64_t mask = (std::uint64_t(1) << c) - 1;
    instr::Label3 out;
    bool ok = true;
    for (unsigned i = 0; i < n && ok; ++i) {
      const std::uint64_t px = static_cast<std::uint64_t>(shr(x.p, i * w)) & mask;
      const std::uint64_t py = static_cast<std::uint64_t>(shr(y.p, i * w)) & mask;
      const Label* r = lnca_->find(px, py);
      if (!r) {
        ok = false;
        break;
      }
      out.p |= shl(u128(r->p), i * w);
      out.b |= shl(u128(r->b), i * w);
      out.l |= shl(u128(r->l), i * w);
    }
    if (ok) {
      ++hits_;
      word_op_count += n;
      return out;
    }
  }
  ++fallbacks_;
  return instr::lnca(x, y, n, c);
}

}  // namespace kdiff
