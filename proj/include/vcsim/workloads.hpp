#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace vcsim {

enum class LayerKind { Conv, Fc, Recurrent };
enum class BitwidthMode { Homogeneous, Heterogeneous };

const char* to_string(LayerKind k);
const char* to_string(BitwidthMode m);

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::Fc;
  std::string from;  // branch input; empty means previous layer

  // conv
  int64_t c = 0, k = 0, h = 0, w = 0, r = 0, s = 0, stride = 1, pad = 0;
  // fc: out features, in features, columns
  int64_t m = 0, kin = 0, n = 0;
  // recurrent
  int64_t hidden = 0, input = 0, gates = 1, timesteps = 1;
  int64_t batch = 1;  // conv, recurrent

  int bw_x = 8;
  int bw_w = 8;
  bool x_signed = false;
  bool w_signed = true;

  int64_t out_h() const;
  int64_t out_w() const;
  int64_t macs() const;
  int64_t weight_elems() const;
  int64_t input_elems() const;   // distinct input activations per layer invocation
  int64_t output_elems() const;
  double weight_bytes() const { return double(weight_elems()) * bw_w / 8.0; }

  void validate() const;  // dims and bitwidths, not chaining
  bool operator==(const LayerSpec&) const = default;
};

LayerSpec conv_layer(std::string name, int64_t C, int64_t K, int64_t H, int64_t W, int64_t R,
                     int64_t stride = 1, int bw_x = 8, int bw_w = 8);
LayerSpec fc_layer(std::string name, int64_t M, int64_t K, int64_t N, int bw_x = 8, int bw_w = 8);
LayerSpec recurrent_layer(std::string name, int64_t hidden, int64_t input, int64_t gates,
                          int64_t timesteps, int64_t batch, int bw_x = 8, int bw_w = 8);

struct NetworkSpec {
  std::string name;
  BitwidthMode mode = BitwidthMode::Heterogeneous;
  std::vector<LayerSpec> layers;

  int64_t total_macs() const;
  double total_weight_bytes() const;
  bool operator==(const NetworkSpec&) const = default;
};

// throws ConfigError naming the layer index on chain / mode violations
void validate_network(const NetworkSpec& net);

constexpr int kNetworkSchemaVersion = 1;
NetworkSpec parse_network(const std::string& text);
std::string serialize_network(const NetworkSpec& net);
NetworkSpec load_network(const std::string& path);

NetworkSpec to_homogeneous(const NetworkSpec& net);

std::string data_dir();
const std::vector<std::string>& bundled_names();
std::string bundled_path(const std::string& name);
// file path, or a bundled benchmark name
NetworkSpec resolve_network(const std::string& name_or_path);
std::vector<NetworkSpec> bundled_suite(bool homogeneous);

}  // namespace vcsim
