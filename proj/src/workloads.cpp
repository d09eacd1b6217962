#include "vcsim/workloads.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vcsim/error.hpp"

namespace vcsim {

const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::Conv: return "conv";
    case LayerKind::Fc: return "fc";
    case LayerKind::Recurrent: return "recurrent";
  }
  return "?";
}

const char* to_string(BitwidthMode m) {
  return m == BitwidthMode::Homogeneous ? "homogeneous" : "heterogeneous";
}

int64_t LayerSpec::out_h() const { return (h + 2 * pad - r) / stride + 1; }
int64_t LayerSpec::out_w() const { return (w + 2 * pad - s) / stride + 1; }

int64_t LayerSpec::macs() const {
  switch (kind) {
    case LayerKind::Conv: return k * c * r * s * out_h() * out_w() * batch;
    case LayerKind::Fc: return m * kin * n;
    case LayerKind::Recurrent: return gates * hidden * (hidden + input) * batch * timesteps;
  }
  return 0;
}

int64_t LayerSpec::weight_elems() const {
  switch (kind) {
    case LayerKind::Conv: return k * c * r * s;
    case LayerKind::Fc: return m * kin;
    case LayerKind::Recurrent: return gates * hidden * (hidden + input);
  }
  return 0;
}

// per timestep for recurrent layers
int64_t LayerSpec::input_elems() const {
  switch (kind) {
    case LayerKind::Conv: return c * h * w * batch;
    case LayerKind::Fc: return kin * n;
    case LayerKind::Recurrent: return (input + hidden) * batch;
  }
  return 0;
}

int64_t LayerSpec::output_elems() const {
  switch (kind) {
    case LayerKind::Conv: return k * out_h() * out_w() * batch;
    case LayerKind::Fc: return m * n;
    case LayerKind::Recurrent: return hidden * batch;
  }
  return 0;
}

void LayerSpec::validate() const {
  auto fail = [&](const std::string& f, const std::string& msg) {
    throw ConfigError("layer '" + name + "' " + f + ": " + msg);
  };
  auto pos = [&](const char* f, int64_t v) {
    if (v < 1) fail(f, "must be positive");
  };
  if (name.empty()) fail("name", "missing");
  if (bw_x < 1 || bw_x > 8) fail("bw_x", "bitwidth " + std::to_string(bw_x) + " outside 1..8");
  if (bw_w < 1 || bw_w > 8) fail("bw_w", "bitwidth " + std::to_string(bw_w) + " outside 1..8");
  switch (kind) {
    case LayerKind::Conv:
      pos("C", c); pos("K", k); pos("H", h); pos("W", w); pos("R", r); pos("S", s);
      pos("stride", stride); pos("batch", batch);
      if (pad < 0) fail("pad", "must be non-negative");
      if (out_h() < 1 || out_w() < 1) fail("R", "filter larger than padded input");
      break;
    case LayerKind::Fc:
      pos("M", m); pos("K", kin); pos("N", n);
      break;
    case LayerKind::Recurrent:
      pos("hidden", hidden); pos("input", input); pos("gates", gates);
      pos("timesteps", timesteps); pos("batch", batch);
      break;
  }
}

LayerSpec conv_layer(std::string name, int64_t C, int64_t K, int64_t H, int64_t W, int64_t R,
                     int64_t stride, int bw_x, int bw_w) {
  LayerSpec l;
  l.name = std::move(name);
  l.kind = LayerKind::Conv;
  l.c = C; l.k = K; l.h = H; l.w = W; l.r = l.s = R;
  l.stride = stride;
  l.pad = (R - 1) / 2;
  l.bw_x = bw_x; l.bw_w = bw_w;
  return l;
}

LayerSpec fc_layer(std::string name, int64_t M, int64_t K, int64_t N, int bw_x, int bw_w) {
  LayerSpec l;
  l.name = std::move(name);
  l.kind = LayerKind::Fc;
  l.m = M; l.kin = K; l.n = N;
  l.bw_x = bw_x; l.bw_w = bw_w;
  return l;
}

LayerSpec recurrent_layer(std::string name, int64_t hidden, int64_t input, int64_t gates,
                          int64_t timesteps, int64_t batch, int bw_x, int bw_w) {
  LayerSpec l;
  l.name = std::move(name);
  l.kind = LayerKind::Recurrent;
  l.hidden = hidden; l.input = input; l.gates = gates;
  l.timesteps = timesteps; l.batch = batch;
  l.bw_x = bw_x; l.bw_w = bw_w;
  return l;
}

int64_t NetworkSpec::total_macs() const {
  int64_t t = 0;
  for (const auto& l : layers) t += l.macs();
  return t;
}

double NetworkSpec::total_weight_bytes() const {
  double t = 0;
  for (const auto& l : layers) t += l.weight_bytes();
  return t;
}

namespace {

// checks that `src`'s output can feed `cur`; returns "" or the reason
std::pair<std::string, std::string> chain_error(const LayerSpec& src, const LayerSpec& cur) {
  using K = LayerKind;
  auto msg = [&](const std::string& what) {
    return "'" + cur.name + "' does not chain from '" + src.name + "': " + what;
  };
  if (src.kind == K::Conv && cur.kind == K::Conv) {
    if (cur.c != src.k)
      return {"C", msg("C=" + std::to_string(cur.c) + " but producer has K=" + std::to_string(src.k))};
    if (cur.h > src.out_h() || cur.w > src.out_w())
      return {"H", msg("input " + std::to_string(cur.h) + "x" + std::to_string(cur.w) +
                       " larger than producer output " + std::to_string(src.out_h()) + "x" +
                       std::to_string(src.out_w()))};
    if (cur.batch != src.batch) return {"batch", msg("batch differs")};
    return {};
  }
  if (src.kind == K::Conv && cur.kind == K::Fc) {
    if (cur.n != src.batch) return {"N", msg("N must equal the producer batch")};
    if (cur.kin % src.k == 0) {
      const int64_t q = cur.kin / src.k;
      for (int64_t p = 1; p <= src.out_h(); ++p)
        if (q % p == 0 && q / p <= src.out_w()) return {};
    }
    return {"K", msg("K=" + std::to_string(cur.kin) + " is not a flattening of " +
                     std::to_string(src.k) + " channels")};
  }
  if (src.kind == K::Fc && cur.kind == K::Fc) {
    if (cur.kin != src.m) return {"K", msg("K=" + std::to_string(cur.kin) + " but producer M=" + std::to_string(src.m))};
    if (cur.n != src.n) return {"N", msg("N differs")};
    return {};
  }
  if (src.kind == K::Fc && cur.kind == K::Recurrent) {
    if (cur.input != src.m) return {"input", msg("input must equal producer M")};
    if (src.n != cur.batch * cur.timesteps) return {"batch", msg("producer N must be batch*timesteps")};
    return {};
  }
  if (src.kind == K::Recurrent && cur.kind == K::Recurrent) {
    if (cur.input != src.hidden) return {"input", msg("input must equal producer hidden")};
    if (cur.batch != src.batch || cur.timesteps != src.timesteps)
      return {"batch", msg("batch/timesteps differ")};
    return {};
  }
  if (src.kind == K::Recurrent && cur.kind == K::Fc) {
    if (cur.kin != src.hidden) return {"K", msg("K must equal producer hidden")};
    if (cur.n != src.batch && cur.n != src.batch * src.timesteps)
      return {"N", msg("N must be batch or batch*timesteps")};
    return {};
  }
  return {"kind", msg(std::string(to_string(src.kind)) + " -> " + to_string(cur.kind) + " unsupported")};
}

// index of the layer feeding `i`, or -1; throws on a bad reference
int producer(const NetworkSpec& net, std::size_t i, std::string& err) {
  const auto& l = net.layers[i];
  if (l.from.empty()) return int(i) - 1;
  for (std::size_t j = 0; j < i; ++j)
    if (net.layers[j].name == l.from) return int(j);
  err = "from='" + l.from + "' does not name an earlier layer";
  return -2;
}

struct Located {
  std::string field, msg;
};

// first problem in the network, with the layer index
bool find_problem(const NetworkSpec& net, std::size_t& idx, Located& out) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& l = net.layers[i];
    idx = i;
    try {
      l.validate();
    } catch (const ConfigError& e) {
      out = {"", e.what()};
      return true;
    }
    if (!names.insert(l.name).second) {
      out = {"name", "duplicate layer name '" + l.name + "'"};
      return true;
    }
    if (net.mode == BitwidthMode::Homogeneous && (l.bw_x != 8 || l.bw_w != 8)) {
      out = {l.bw_x != 8 ? "bw_x" : "bw_w", "homogeneous network requires 8-bit layers ('" + l.name + "')"};
      return true;
    }
    std::string err;
    const int p = producer(net, i, err);
    if (p == -2) {
      out = {"from", err};
      return true;
    }
    if (p >= 0) {
      auto [field, msg] = chain_error(net.layers[p], l);
      if (!msg.empty()) {
        out = {field, msg};
        return true;
      }
    }
  }
  return false;
}

}  // namespace

void validate_network(const NetworkSpec& net) {
  if (net.layers.empty()) throw ConfigError("network '" + net.name + "' has no layers");
  std::size_t idx = 0;
  Located p;
  if (find_problem(net, idx, p))
    throw ConfigError("layer " + std::to_string(idx) + (p.field.empty() ? "" : " field '" + p.field + "'") +
                      ": " + p.msg);
}

// --- text format ---

namespace {

int64_t parse_int(const std::string& v, int line, const std::string& field) {
  std::size_t used = 0;
  int64_t out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ParseError(line, field, "expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, int line, const std::string& field) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ParseError(line, field, "expected 0/1, got '" + v + "'");
}

LayerSpec parse_layer(std::istringstream& is, int line) {
  LayerSpec l;
  if (!(is >> l.name)) throw ParseError(line, "name", "layer needs a name");
  std::map<std::string, std::string> kv;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(line, tok, "expected key=value");
    const auto key = tok.substr(0, eq);
    if (!kv.emplace(key, tok.substr(eq + 1)).second) throw ParseError(line, key, "repeated key");
  }
  auto take = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) return {};
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto req = [&](const std::string& key) {
    auto v = take(key);
    if (v.empty()) throw ParseError(line, key, "required for layer '" + l.name + "'");
    return parse_int(v, line, key);
  };
  auto opt = [&](const std::string& key, int64_t def) {
    auto v = take(key);
    return v.empty() ? def : parse_int(v, line, key);
  };

  const auto kind = take("kind");
  if (kind == "conv") {
    l.kind = LayerKind::Conv;
    l.c = req("C"); l.k = req("K"); l.h = req("H");
    l.w = opt("W", l.h);
    l.r = req("R");
    l.s = opt("S", l.r);
    l.stride = opt("stride", 1);
    l.pad = opt("pad", (l.r - 1) / 2);
    l.batch = opt("batch", 1);
  } else if (kind == "fc") {
    l.kind = LayerKind::Fc;
    l.m = req("M"); l.kin = req("K");
    l.n = opt("N", 1);
  } else if (kind == "recurrent") {
    l.kind = LayerKind::Recurrent;
    l.hidden = req("hidden"); l.input = req("input");
    l.gates = opt("gates", 1);
    l.timesteps = req("timesteps");
    l.batch = opt("batch", 1);
  } else {
    throw ParseError(line, "kind", "expected conv, fc or recurrent, got '" + kind + "'");
  }
  for (const char* f : {"bw_x", "bw_w"}) {
    const auto v = req(f);
    if (v < 1 || v > 8)
      throw ParseError(line, f, "layer '" + l.name + "' bitwidth " + std::to_string(v) + " outside 1..8");
    (f[3] == 'x' ? l.bw_x : l.bw_w) = int(v);
  }
  if (auto v = take("x_signed"); !v.empty()) l.x_signed = parse_bool(v, line, "x_signed");
  if (auto v = take("w_signed"); !v.empty()) l.w_signed = parse_bool(v, line, "w_signed");
  l.from = take("from");
  if (!kv.empty()) throw ParseError(line, kv.begin()->first, "unknown key for " + kind + " layer");
  try {
    l.validate();
  } catch (const ConfigError& e) {
    throw ParseError(line, "", e.what());
  }
  return l;
}

}  // namespace

NetworkSpec parse_network(const std::string& text) {
  NetworkSpec net;
  std::vector<int> lines;
  bool have_schema = false, have_mode = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream is(raw);
    std::string word;
    if (!(is >> word)) continue;
    if (!have_schema) {
      std::string tag;
      int ver = 0;
      if (word != "schema" || !(is >> tag >> ver) || tag != "vcsim-network")
        throw ParseError(line, "schema", "file must start with 'schema vcsim-network <version>'");
      if (ver != kNetworkSchemaVersion)
        throw ParseError(line, "schema", "unsupported version " + std::to_string(ver));
      have_schema = true;
    } else if (word == "name") {
      if (!(is >> net.name)) throw ParseError(line, "name", "missing value");
    } else if (word == "mode") {
      std::string m;
      is >> m;
      if (m == "homogeneous") net.mode = BitwidthMode::Homogeneous;
      else if (m == "heterogeneous") net.mode = BitwidthMode::Heterogeneous;
      else throw ParseError(line, "mode", "expected homogeneous or heterogeneous, got '" + m + "'");
      have_mode = true;
    } else if (word == "layer") {
      net.layers.push_back(parse_layer(is, line));
      lines.push_back(line);
    } else {
      throw ParseError(line, word, "unknown directive");
    }
  }
  if (!have_schema) throw ParseError(line, "schema", "missing schema line");
  if (net.name.empty()) throw ParseError(line, "name", "missing network name");
  if (!have_mode) throw ParseError(line, "mode", "missing bitwidth mode");
  if (net.layers.empty()) throw ParseError(line, "layer", "no layers");
  std::size_t idx = 0;
  Located p;
  if (find_problem(net, idx, p)) throw ParseError(lines[idx], p.field, p.msg);
  return net;
}

std::string serialize_network(const NetworkSpec& net) {
  std::ostringstream os;
  os << "schema vcsim-network " << kNetworkSchemaVersion << "\n";
  os << "name " << net.name << "\n";
  os << "mode " << to_string(net.mode) << "\n";
  for (const auto& l : net.layers) {
    os << "layer " << l.name << " kind=" << to_string(l.kind);
    switch (l.kind) {
      case LayerKind::Conv:
        os << " C=" << l.c << " K=" << l.k << " H=" << l.h << " W=" << l.w << " R=" << l.r
           << " S=" << l.s << " stride=" << l.stride << " pad=" << l.pad << " batch=" << l.batch;
        break;
      case LayerKind::Fc:
        os << " M=" << l.m << " K=" << l.kin << " N=" << l.n;
        break;
      case LayerKind::Recurrent:
        os << " hidden=" << l.hidden << " input=" << l.input << " gates=" << l.gates
           << " timesteps=" << l.timesteps << " batch=" << l.batch;
        break;
    }
    os << " bw_x=" << l.bw_x << " bw_w=" << l.bw_w << " x_signed=" << int(l.x_signed)
       << " w_signed=" << int(l.w_signed);
    if (!l.from.empty()) os << " from=" << l.from;
    os << "\n";
  }
  return os.str();
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("network file not found: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_network(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line, e.field, std::string(path) + ": " + e.what());
  }
}

NetworkSpec to_homogeneous(const NetworkSpec& net) {
  NetworkSpec out = net;
  out.mode = BitwidthMode::Homogeneous;
  for (auto& l : out.layers) l.bw_x = l.bw_w = 8;
  return out;
}

std::string data_dir() {
  if (const char* e = std::getenv("VCSIM_DATA_DIR"); e && *e) return e;
  return VCSIM_DATA_DIR;
}

const std::vector<std::string>& bundled_names() {
  static const std::vector<std::string> names{"alexnet", "resnet18", "resnet50",
                                              "vgg16",   "rnn",      "lstm"};
  return names;
}

std::string bundled_path(const std::string& name) {
  return data_dir() + "/networks/" + name + ".net";
}

NetworkSpec resolve_network(const std::string& s) {
  if (std::filesystem::exists(s)) return load_network(s);
  for (const auto& n : bundled_names())
    if (n == s) return load_network(bundled_path(n));
  throw ConfigError("no network file or bundled benchmark named '" + s + "'");
}

std::vector<NetworkSpec> bundled_suite(bool homogeneous) {
  std::vector<NetworkSpec> out;
  for (const auto& n : bundled_names()) {
    auto net = load_network(bundled_path(n));
    out.push_back(homogeneous ? to_homogeneous(net) : net);
  }
  return out;
}

}  // namespace vcsim
