#include <gtest/gtest.h>

#include "rci/network.hpp"

using namespace rci;

namespace {

Subsystem scalar_sub(const std::string& id, double a = 0.5) {
  Subsystem s;
  s.id = id;
  s.A = Matrix::Constant(1, 1, a);
  s.B = Matrix::Constant(1, 1, 1.0);
  s.Gx = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gu = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gd = Zonotope(Matrix::Constant(1, 1, 1.0));
  return s;
}

Json two_node_doc() {
  NetworkSystem net({scalar_sub("a"), scalar_sub("b")},
                    {{"a", "b", Matrix::Constant(1, 1, 0.1), std::nullopt},
                     {"b", "a", std::nullopt, Matrix::Constant(1, 1, 0.2)}});
  return to_json(net);
}

std::string parse_error_path(const Json& doc) {
  try {
    network_from_json(doc);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST(Network, RoundTrip) {
  const Json doc = two_node_doc();
  const NetworkSystem net = network_from_json(doc);
  EXPECT_EQ(net.size(), 2);
  EXPECT_EQ(serialize_network(net), serialize_network(parse_network(serialize_network(net))));
  EXPECT_EQ(net.index_of("b"), 1);
  ASSERT_EQ(net.incoming(0).size(), 1u);
  EXPECT_EQ(net.couplings()[net.incoming(0)[0]].from, "b");
  // Absent blocks read as zero.
  EXPECT_TRUE(net.coupling_A(net.couplings()[1]).isZero());
  EXPECT_FALSE(net.couplings()[1].A.has_value());
}

TEST(Network, DuplicateId) {
  Json doc = two_node_doc();
  doc["subsystems"][1]["id"] = "a";
  EXPECT_EQ(parse_error_path(doc), "$.subsystems[1].id");
}

TEST(Network, DanglingReference) {
  Json doc = two_node_doc();
  doc["couplings"][0]["from"] = "s9";
  try {
    network_from_json(doc);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("s9"), std::string::npos);
    EXPECT_EQ(e.path(), "$.couplings[0].from");
  }
}

TEST(Network, SelfCouplingRejected) {
  Json doc = two_node_doc();
  doc["couplings"][0]["to"] = "a";
  EXPECT_EQ(parse_error_path(doc), "$.couplings[0]");
}

TEST(Network, ShapeErrorsHavePaths) {
  Json doc = two_node_doc();
  doc["subsystems"][0]["Gx"]["generators"] = {{1.0, 0.0}, {0.0, 1.0}};
  doc["subsystems"][0]["Gx"]["center"] = {0.0, 0.0};
  EXPECT_EQ(parse_error_path(doc), "$.subsystems[0].Gx");

  doc = two_node_doc();
  doc["couplings"][0]["A"] = {{1.0, 2.0}};
  EXPECT_EQ(parse_error_path(doc), "$.couplings[0].A");

  doc = two_node_doc();
  doc["subsystems"][1]["B"] = {{1.0}, {1.0}};
  EXPECT_EQ(parse_error_path(doc), "$.subsystems[1].B");
}

TEST(Network, NonzeroCenterRejected) {
  Json doc = two_node_doc();
  doc["subsystems"][0]["Gd"]["center"] = {0.5};
  EXPECT_EQ(parse_error_path(doc), "$.subsystems[0].Gd.center");
}

TEST(Network, UnknownFieldsRejected) {
  Json doc = two_node_doc();
  doc["subsystems"][0]["Q"] = 1;
  EXPECT_EQ(parse_error_path(doc), "$.subsystems[0].Q");
  doc = two_node_doc();
  doc["extra"] = true;
  EXPECT_EQ(parse_error_path(doc), "$.extra");
}

TEST(Network, MalformedJson) { EXPECT_THROW(parse_network("{\"subsystems\": ["), ParseError); }

TEST(Network, NonFiniteRejected) {
  Json doc = two_node_doc();
  doc["subsystems"][0]["A"] = {{"nan"}};
  EXPECT_THROW(network_from_json(doc), ParseError);
}

TEST(Network, AggregateBlocks) {
  const NetworkSystem net = network_from_json(two_node_doc());
  const Aggregate agg = aggregate(net);
  Matrix a(2, 2), b(2, 2);
  a << 0.5, 0.0, 0.1, 0.5;
  b << 1.0, 0.2, 0.0, 1.0;
  EXPECT_EQ(agg.A, a);
  EXPECT_EQ(agg.B, b);
  EXPECT_EQ(agg.Gx.generators(), 10.0 * Matrix::Identity(2, 2));
  EXPECT_EQ(agg.state_offset, (std::vector<int>{0, 1}));
}
