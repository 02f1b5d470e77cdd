#include "fierg/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "fierg/errors.hpp"

namespace fierg {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

bool try_parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last;
}

bool try_parse_int(const std::string& s, long long& v) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  return out;
}

// Label -> position map for one tensor axis.
class Axis {
 public:
  Axis(const char* name, std::optional<int> declared) : name_(name), declared_(declared) {}

  void see(const std::string& label, std::size_t line) {
    if (declared_) {
      long long v = 0;
      if (!try_parse_int(label, v) || v < 1 || v > *declared_)
        throw ParseError(std::string(name_) + " '" + label + "' is not an index in 1.." + std::to_string(*declared_),
                         line);
      return;
    }
    if (seen_.emplace(label, order_.size()).second) order_.push_back(label);
  }

  // Fixes positions once every label has been seen.
  void finalize() {
    if (declared_) {
      order_.clear();
      for (int k = 1; k <= *declared_; ++k) order_.push_back(std::to_string(k));
    } else {
      numeric_ = !order_.empty();
      std::vector<std::pair<double, std::string>> keyed;
      for (const auto& l : order_) {
        double v = 0;
        if (!try_parse_double(l, v)) {
          numeric_ = false;
          break;
        }
        keyed.emplace_back(v, l);
      }
      if (numeric_) {
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t k = 0; k < keyed.size(); ++k) order_[k] = keyed[k].second;
        values_.clear();
        for (auto& kv : keyed) values_.push_back(kv.first);
      }
    }
    if (declared_) {
      numeric_ = true;
      values_.clear();
      for (int k = 1; k <= *declared_; ++k) values_.push_back(k);
    }
    position_.clear();
    for (std::size_t k = 0; k < order_.size(); ++k) position_[order_[k]] = static_cast<int>(k);
  }

  int position(const std::string& label) const {
    if (declared_) return static_cast<int>(std::stoll(label)) - 1;
    return position_.at(label);
  }
  int size() const { return static_cast<int>(order_.size()); }
  const std::vector<std::string>& labels() const { return order_; }
  bool numeric() const { return numeric_; }
  const std::vector<double>& values() const { return values_; }

 private:
  const char* name_;
  std::optional<int> declared_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::size_t> seen_;
  std::unordered_map<std::string, int> position_;
  std::vector<double> values_;
  bool numeric_ = false;
};

struct RawCell {
  std::string time, respondent, item;
  std::uint8_t value;
  std::size_t line;
};

std::uint8_t parse_binary(const std::string& s, std::size_t line) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw ParseError("value '" + s + "' is not binary (expected 0 or 1)", line);
}

}  // namespace

TensorFormat parse_tensor_format(const std::string& s) {
  if (s == "long") return TensorFormat::Long;
  if (s == "dense") return TensorFormat::Dense;
  throw InvalidInput("unknown tensor format '" + s + "' (expected long or dense)");
}

std::string to_string(TensorFormat f) { return f == TensorFormat::Long ? "long" : "dense"; }

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double v = 0;
  if (!try_parse_double(s, v)) throw InvalidInput("'" + s + "' is not a number");
  return v;
}

LoadedTensor parse_tensor(std::istream& in, TensorFormat format, std::optional<TensorDims> dims) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input, expected a header", 1);
  ++lineno;
  const auto header = split_csv(line);

  Axis times("time", dims ? std::optional<int>(dims->T) : std::nullopt);
  Axis respondents("respondent", dims ? std::optional<int>(dims->n) : std::nullopt);
  Axis items("item", dims ? std::optional<int>(dims->p) : std::nullopt);
  std::vector<RawCell> cells;

  if (format == TensorFormat::Long) {
    if (header != std::vector<std::string>{"time", "respondent", "item", "value"})
      throw ParseError("header must be 'time,respondent,item,value'", lineno);
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line == "\r") continue;
      auto f = split_csv(line);
      if (f.size() != 4) throw ParseError("expected 4 fields, found " + std::to_string(f.size()), lineno);
      times.see(f[0], lineno);
      respondents.see(f[1], lineno);
      items.see(f[2], lineno);
      cells.push_back({f[0], f[1], f[2], parse_binary(f[3], lineno), lineno});
    }
  } else {
    if (header.size() < 3 || header[0] != "time" || header[1] != "respondent")
      throw ParseError("header must be 'time,respondent,<item labels...>'", lineno);
    const std::vector<std::string> item_labels(header.begin() + 2, header.end());
    for (const auto& l : item_labels) items.see(l, lineno);
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line == "\r") continue;
      auto f = split_csv(line);
      if (f.size() != header.size())
        throw ParseError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()),
                         lineno);
      times.see(f[0], lineno);
      respondents.see(f[1], lineno);
      for (std::size_t k = 0; k < item_labels.size(); ++k)
        cells.push_back({f[0], f[1], item_labels[k], parse_binary(f[k + 2], lineno), lineno});
    }
  }
  times.finalize();
  respondents.finalize();
  items.finalize();

  const int T = times.size(), n = respondents.size(), p = items.size();
  if (T < 1 || n < 1) throw ParseError("no data rows", lineno);
  if (p < 2) throw ParseError("need at least two items, found " + std::to_string(p), lineno);

  std::vector<std::uint8_t> filled(static_cast<std::size_t>(T) * n * p, 0);
  std::vector<std::vector<std::uint8_t>> data(T, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * p, 0));
  for (const auto& c : cells) {
    const int t = times.position(c.time);
    const int l = respondents.position(c.respondent);
    const int j = items.position(c.item);
    const std::size_t k = (static_cast<std::size_t>(t) * n + l) * p + j;
    if (filled[k])
      throw ParseError("duplicate cell (time " + c.time + ", respondent " + c.respondent + ", item " + c.item + ")",
                       c.line);
    filled[k] = 1;
    data[t][static_cast<std::size_t>(l) * p + j] = c.value;
  }
  const auto missing = std::find(filled.begin(), filled.end(), 0);
  if (missing != filled.end()) {
    const auto k = static_cast<std::size_t>(missing - filled.begin());
    const auto t = k / (static_cast<std::size_t>(n) * p);
    const auto l = (k / p) % n;
    const auto j = k % p;
    throw ParseError("ragged data: no value for time " + times.labels()[t] + ", respondent " +
                         respondents.labels()[l] + ", item " + items.labels()[j],
                     lineno);
  }

  std::vector<ResponseSlice> slices;
  slices.reserve(T);
  for (int t = 0; t < T; ++t) slices.emplace_back(n, p, std::move(data[t]));
  std::vector<double> time_values;
  if (times.numeric()) time_values = times.values();
  return {ResponseTensor(std::move(slices), std::move(time_values)), times.labels(), respondents.labels(),
          items.labels()};
}

LoadedTensor load_tensor(const std::filesystem::path& path, TensorFormat format, std::optional<TensorDims> dims) {
  auto in = open_in(path);
  return parse_tensor(in, format, dims);
}

void write_tensor(std::ostream& out, const ResponseTensor& x, TensorFormat format) {
  const auto times = x.times();
  if (format == TensorFormat::Long) {
    out << "time,respondent,item,value\n";
    for (int t = 0; t < x.T(); ++t) {
      const std::string tl = format_double(times[t]);
      for (int l = 0; l < x.n(); ++l)
        for (int j = 0; j < x.p(); ++j)
          out << tl << ',' << l + 1 << ',' << j + 1 << ',' << static_cast<int>(x(t, l, j)) << '\n';
    }
  } else {
    out << "time,respondent";
    for (int j = 0; j < x.p(); ++j) out << ',' << j + 1;
    out << '\n';
    for (int t = 0; t < x.T(); ++t) {
      const std::string tl = format_double(times[t]);
      for (int l = 0; l < x.n(); ++l) {
        out << tl << ',' << l + 1;
        for (int j = 0; j < x.p(); ++j) out << ',' << static_cast<int>(x(t, l, j));
        out << '\n';
      }
    }
  }
}

void save_tensor(const std::filesystem::path& path, const ResponseTensor& x, TensorFormat format) {
  auto out = open_out(path);
  write_tensor(out, x, format);
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

namespace {

constexpr const char* kChainMagic = "FIERGM-CHAIN";

template <class V>
void write_section(std::ostream& out, const char* name, const V& values, std::size_t per_line) {
  out << "[" << name << " " << values.size() << "]\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if constexpr (std::is_floating_point_v<typename V::value_type>) {
      out << format_double(values[k]);
    } else {
      out << values[k];
    }
    out << ((k + 1) % per_line == 0 || k + 1 == values.size() ? '\n' : ' ');
  }
}

class ChainReader {
 public:
  explicit ChainReader(std::istream& in) : in_(in) {}

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) throw IntegrityError("chain file truncated after line " + std::to_string(line_));
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::string key_value(const std::string& key) {
    const std::string line = next_line();
    std::istringstream ss(line);
    std::string k, v;
    if (!(ss >> k >> v) || k != key)
      throw IntegrityError("line " + std::to_string(line_) + ": expected '" + key + " <value>'");
    return v;
  }

  long long integer(const std::string& key) {
    long long v = 0;
    const std::string s = key_value(key);
    if (!try_parse_int(s, v)) throw IntegrityError("line " + std::to_string(line_) + ": bad integer for " + key);
    return v;
  }

  double real(const std::string& key) {
    double v = 0;
    const std::string s = key_value(key);
    if (!try_parse_double(s, v)) throw IntegrityError("line " + std::to_string(line_) + ": bad number for " + key);
    return v;
  }

  template <class T>
  std::vector<T> section(const std::string& name, std::size_t expected) {
    const std::string head = next_line();
    const std::string want = "[" + name + " " + std::to_string(expected) + "]";
    if (head != want)
      throw IntegrityError("line " + std::to_string(line_) + ": expected section header '" + want + "'");
    std::vector<T> values;
    values.reserve(expected);
    while (values.size() < expected) {
      const std::string line = next_line();
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) {
        if (values.size() == expected)
          throw IntegrityError("line " + std::to_string(line_) + ": section " + name + " has extra values");
        if constexpr (std::is_floating_point_v<T>) {
          double v = 0;
          if (!try_parse_double(tok, v)) throw IntegrityError("line " + std::to_string(line_) + ": bad number");
          values.push_back(v);
        } else {
          long long v = 0;
          if (!try_parse_int(tok, v)) throw IntegrityError("line " + std::to_string(line_) + ": bad integer");
          values.push_back(static_cast<T>(v));
        }
      }
    }
    return values;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace

void write_chain(std::ostream& out, const ChainOutput& c) {
  out << kChainMagic << ' ' << kChainFormatVersion << '\n';
  out << "T " << c.T << "\np " << c.p << "\nq " << c.q << "\nk_n " << c.k_n << "\ndraws " << c.draws
      << "\niterations " << c.iterations << "\nburnin " << c.burnin << "\nthin " << c.thin << "\nworkers "
      << c.workers << "\ninner_multiplier " << c.inner_multiplier << "\nseed " << c.seed
      << "\nnonfinite_rejections " << c.nonfinite_rejections << "\nwall_seconds " << format_double(c.wall_seconds)
      << '\n';
  const auto q = static_cast<std::size_t>(std::max(c.q, 1));
  write_section(out, "theta", c.theta, q);
  write_section(out, "omega", c.omega, q);
  write_section(out, "tau", c.tau, q);
  write_section(out, "sigma2", c.sigma2, q);
  write_section(out, "beta", c.beta, static_cast<std::size_t>(std::max(c.k_n, 1)));
  write_section(out, "accepted", c.accepted, q);
  write_section(out, "attempted", c.attempted, q);
  write_section(out, "proposal_sd", c.proposal_sd, q);
  out << "END 8\n";
}

void save_chain(const std::filesystem::path& path, const ChainOutput& chain) {
  auto out = open_out(path);
  write_chain(out, chain);
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

ChainOutput read_chain(std::istream& in) {
  ChainReader r(in);
  {
    std::istringstream ss(r.next_line());
    std::string magic;
    int version = 0;
    if (!(ss >> magic) || magic != kChainMagic) throw IntegrityError("not a chain file (missing FIERGM-CHAIN header)");
    if (!(ss >> version)) throw IntegrityError("chain file header has no version");
    if (version != kChainFormatVersion)
      throw VersionError("chain file version " + std::to_string(version) + " is not supported (expected " +
                         std::to_string(kChainFormatVersion) + ")");
  }
  ChainOutput c;
  c.T = static_cast<int>(r.integer("T"));
  c.p = static_cast<int>(r.integer("p"));
  c.q = static_cast<int>(r.integer("q"));
  c.k_n = static_cast<int>(r.integer("k_n"));
  c.draws = static_cast<int>(r.integer("draws"));
  c.iterations = static_cast<int>(r.integer("iterations"));
  c.burnin = static_cast<int>(r.integer("burnin"));
  c.thin = static_cast<int>(r.integer("thin"));
  c.workers = static_cast<int>(r.integer("workers"));
  c.inner_multiplier = static_cast<int>(r.integer("inner_multiplier"));
  {
    const std::string s = r.key_value("seed");
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), c.seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw IntegrityError("bad seed value");
  }
  c.nonfinite_rejections = r.integer("nonfinite_rejections");
  c.wall_seconds = r.real("wall_seconds");
  if (c.T < 1 || c.p < 1 || c.q != ParamIndex(c.p).q() || c.k_n < 1 || c.draws < 0)
    throw IntegrityError("chain header dimensions are inconsistent");
  const auto D = static_cast<std::size_t>(c.draws);
  const auto Tq = static_cast<std::size_t>(c.T) * c.q;
  c.theta = r.section<double>("theta", D * Tq);
  c.omega = r.section<double>("omega", D * c.q);
  c.tau = r.section<double>("tau", D * c.q);
  c.sigma2 = r.section<double>("sigma2", D * c.q);
  c.beta = r.section<double>("beta", D * c.q * c.k_n);
  c.accepted = r.section<std::int64_t>("accepted", Tq);
  c.attempted = r.section<std::int64_t>("attempted", Tq);
  c.proposal_sd = r.section<double>("proposal_sd", Tq);
  if (r.next_line() != "END 8") throw IntegrityError("chain file is missing its END trailer");
  return c;
}

ChainOutput load_chain(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_chain(in);
}

void write_estimates_csv(std::ostream& out, const RowMatrix& estimates, const ParamIndex& index,
                         const std::vector<double>& times) {
  if (estimates.cols() != index.q()) throw InvalidInput("estimate table does not match the parameter index");
  if (static_cast<Eigen::Index>(times.size()) != estimates.rows()) throw InvalidInput("need one time per row");
  out << "time";
  for (int i = 0; i < index.q(); ++i) out << ',' << index.label(i).str();
  out << '\n';
  for (Eigen::Index t = 0; t < estimates.rows(); ++t) {
    out << format_double(times[t]);
    for (int i = 0; i < index.q(); ++i) out << ',' << format_double(estimates(t, i));
    out << '\n';
  }
}

void save_estimates_csv(const std::filesystem::path& path, const RowMatrix& estimates, const ParamIndex& index,
                        const std::vector<double>& times) {
  auto out = open_out(path);
  write_estimates_csv(out, estimates, index, times);
}

RowMatrix read_estimates_csv(std::istream& in, const ParamIndex& index) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty estimate table", lineno);
  const auto header = split_csv(line);
  if (static_cast<int>(header.size()) != index.q() + 1 || header[0] != "time")
    throw ParseError("estimate header does not match the parameter index", lineno);
  for (int i = 0; i < index.q(); ++i) {
    if (header[i + 1] != index.label(i).str())
      throw ParseError("column " + std::to_string(i + 2) + " is '" + header[i + 1] + "', expected '" +
                           index.label(i).str() + "'",
                       lineno);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw ParseError("wrong number of fields", lineno);
    std::vector<double> row(index.q());
    for (int i = 0; i < index.q(); ++i) {
      if (!try_parse_double(f[i + 1], row[i])) throw ParseError("'" + f[i + 1] + "' is not a number", lineno);
    }
    rows.push_back(std::move(row));
  }
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), index.q());
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (int i = 0; i < index.q(); ++i) m(static_cast<Eigen::Index>(t), i) = rows[t][i];
  return m;
}

RowMatrix load_estimates_csv(const std::filesystem::path& path, const ParamIndex& index) {
  auto in = open_in(path);
  return read_estimates_csv(in, index);
}

void write_truth_csv(std::ostream& out, const ScenarioTruth& truth) {
  const ParamIndex& index = truth.theta.index();
  out << "t,i,label,value\n";
  for (int t = 0; t < truth.theta.T(); ++t)
    for (int i = 0; i < index.q(); ++i)
      out << t + 1 << ',' << i + 1 << ',' << index.label(i).str() << ',' << format_double(truth.theta(t, i)) << '\n';
}

ParamState read_truth_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"t", "i", "label", "value"})
    throw ParseError("truth header must be 't,i,label,value'", lineno);
  std::map<std::pair<long long, long long>, double> values;
  long long T = 0, q = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    long long t = 0, i = 0;
    double v = 0;
    if (f.size() != 4 || !try_parse_int(f[0], t) || !try_parse_int(f[1], i) || !try_parse_double(f[3], v) || t < 1 ||
        i < 1)
      throw ParseError("malformed truth row", lineno);
    if (!values.emplace(std::make_pair(t, i), v).second) throw ParseError("duplicate truth entry", lineno);
    T = std::max(T, t);
    q = std::max(q, i);
  }
  if (values.size() != static_cast<std::size_t>(T * q)) throw ParseError("truth table is incomplete", lineno);
  const ParamIndex index(item_count_from_q(static_cast<std::size_t>(q)));
  ParamState theta(index, static_cast<int>(T));
  for (const auto& [key, v] : values) theta(static_cast<int>(key.first - 1), static_cast<int>(key.second - 1)) = v;
  return theta;
}

void save_scenario_bundle(const std::filesystem::path& dir, const Scenario& scenario) {
  std::filesystem::create_directories(dir);
  save_tensor(dir / "tensor.csv", scenario.data);
  {
    auto out = open_out(dir / "truth.csv");
    write_truth_csv(out, scenario.truth);
  }
  const ParamIndex& index = scenario.truth.theta.index();
  {
    auto out = open_out(dir / "zero_set.csv");
    out << "i,label\n";
    for (int i : scenario.truth.zero_set) out << i + 1 << ',' << index.label(i).str() << '\n';
  }
  {
    auto out = open_out(dir / "groups.csv");
    out << "i,label,group,level\n";
    for (int i = 0; i < index.q(); ++i)
      out << i + 1 << ',' << index.label(i).str() << ',' << to_string(scenario.truth.groups[i]) << ','
          << format_double(scenario.truth.levels[i]) << '\n';
  }
}

ScenarioTruth load_truth_bundle(const std::filesystem::path& dir) {
  ScenarioTruth truth;
  {
    auto in = open_in(dir / "truth.csv");
    truth.theta = read_truth_csv(in);
  }
  const int q = truth.theta.q();
  truth.groups.assign(q, ParamGroup::Easiness);
  truth.levels.assign(q, 0.0);
  {
    auto in = open_in(dir / "groups.csv");
    std::string line;
    std::size_t lineno = 1;
    std::getline(in, line);
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line == "\r") continue;
      const auto f = split_csv(line);
      long long i = 0;
      if (f.size() != 4 || !try_parse_int(f[0], i) || i < 1 || i > q) throw ParseError("malformed group row", lineno);
      truth.groups[i - 1] = parse_param_group(f[2]);
      truth.levels[i - 1] = parse_double(f[3]);
    }
  }
  {
    auto in = open_in(dir / "zero_set.csv");
    std::string line;
    std::size_t lineno = 1;
    std::getline(in, line);
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line == "\r") continue;
      const auto f = split_csv(line);
      long long i = 0;
      if (f.empty() || !try_parse_int(f[0], i) || i < 1 || i > q) throw ParseError("malformed zero-set row", lineno);
      truth.zero_set.push_back(static_cast<int>(i - 1));
    }
  }
  return truth;
}

void write_shrinkage_csv(std::ostream& out, const ShrinkageReport& report) {
  out << "i,label,mean_omega,verdict\n";
  for (const auto& e : report.entries)
    out << e.index + 1 << ',' << e.label << ',' << format_double(e.mean_omega) << ','
        << (e.zero ? "zero" : "nonzero") << '\n';
}

void write_ppc_summary_csv(std::ostream& out, const PpcReport& report, const ParamIndex& index) {
  out << "t,i,label,observed,simulated\n";
  for (const auto& r : report.summary)
    out << r.t + 1 << ',' << r.i + 1 << ',' << index.label(r.i).str() << ',' << format_double(r.observed) << ','
        << format_double(r.simulated) << '\n';
}

void write_ppc_degree_csv(std::ostream& out, const PpcReport& report) {
  out << "t,m,observed,simulated\n";
  for (const auto& r : report.degree)
    out << r.t + 1 << ',' << r.m << ',' << format_double(r.observed) << ',' << format_double(r.simulated) << '\n';
}

}  // namespace fierg
