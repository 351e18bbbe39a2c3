#include <random>
#include <sstream>

#include "doctest.h"
#include "qwalk/checkpoint.hpp"
#include "oracles.hpp"

using namespace qwalk;

namespace {

struct Fixture {
  PreparedGraph graph;
  ModelSpec spec;
  Fixture() {
    std::mt19937_64 rng(1);
    const Graph g = oracle::random_connected_graph(6, rng);
    graph = prepare_graph(g, EdgeOrdering::as_given(), 0, {}, DiffusionKind::quantum_walk);
    spec.walk = {3, CoinPlacement::spatial, CoinMode::unconstrained, true, true, true};
    spec.n_nodes = 6;
    spec.slot_dim = g.max_degree();
    spec.in_features = 2;
    spec.hidden = {4};
    spec.outputs = 1;
    spec.readout = Readout::sum;
  }
};

std::string saved(const ModelGraphNet& m, const std::string& config = "[experiment]\nname = x\n") {
  std::ostringstream os;
  save_checkpoint(os, m, config);
  return os.str();
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("checkpoint round trip restores exact parameters and outputs") {
  Fixture f;
  ModelGraphNet a(f.spec, 3, &f.graph), b(f.spec, 4, &f.graph);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (Parameter& p : a.parameters())
    for (double& v : p.value) v = nd(rng) / 3.0;
  std::istringstream in(saved(a, "[experiment]\nname = demo\n; trailing\n"));
  const CheckpointContents c = load_checkpoint(in);
  CHECK(c.config_text == "[experiment]\nname = demo\n; trailing\n");
  apply_checkpoint(c, b);
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    CHECK(a.parameters()[i].value == b.parameters()[i].value);
    CHECK(a.parameters()[i].trainable == b.parameters()[i].trainable);
  }
  Matrix x(6, 2);
  x.setRandom();
  CHECK(a.forward(f.graph, x) == b.forward(f.graph, x));
  CHECK(saved(b, "[experiment]\nname = demo\n; trailing\n") == in.str());
}

TEST_CASE("corrupted checkpoints fail the checksum") {
  Fixture f;
  ModelGraphNet a(f.spec, 3, &f.graph);
  std::string text = saved(a);
  const auto at = text.find("param ");
  REQUIRE(at != std::string::npos);
  const auto digit = text.find_first_of("123456789", text.find('\n', at));
  text[digit] = text[digit] == '9' ? '8' : static_cast<char>(text[digit] + 1);
  std::istringstream in(text);
  CHECK_THROWS_WITH_AS(load_checkpoint(in), doctest::Contains("checksum"), DataError);

  std::istringstream truncated(saved(a).substr(0, 40));
  CHECK_THROWS_AS(load_checkpoint(truncated), DataError);
  std::istringstream junk("hello\n");
  CHECK_THROWS_AS(load_checkpoint(junk), DataError);
}

TEST_CASE("shape mismatch names the parameter") {
  Fixture f;
  ModelGraphNet a(f.spec, 3, &f.graph);
  ModelSpec wider = f.spec;
  wider.hidden = {5};
  ModelGraphNet b(wider, 3, &f.graph);
  std::istringstream in(saved(a));
  const CheckpointContents c = load_checkpoint(in);
  CHECK_THROWS_WITH_AS(apply_checkpoint(c, b), doctest::Contains("dense0.weights"), DataError);
}
