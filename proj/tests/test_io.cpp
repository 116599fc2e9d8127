#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rally/io.hpp"

using namespace rally;

namespace {

OutputTable sample() {
  OutputTable t({"name", "count", "value", "note"});
  t.add_row({std::string("plain"), 3LL, 0.1234567890123456, std::monostate{}});
  t.add_row({std::string("with, comma \"q\""), -7LL, 1e-300, std::string("x")});
  t.add_row({std::string("big"), 0LL, 123456789012345.0, std::string("")});
  return t;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("twelve significant digits") {
    CHECK(format_number(0.1234567890123456) == "0.123456789012");
    CHECK(format_number(41.602700000001) == "41.6027");
    CHECK(format_number(41.60270001) == "41.60270001");
    CHECK(format_number(2.5e-31) == "2.5e-31");
    CHECK(std::stod(format_number(M_PI)) == doctest::Approx(M_PI).epsilon(1e-11));
  }

  TEST_CASE("CSV round trip") {
    const OutputTable t = sample();
    std::stringstream ss;
    t.write_csv(ss);
    const OutputTable back = OutputTable::read_csv(ss);
    CHECK(back.columns() == t.columns());
    REQUIRE(back.rows().size() == 3);
    CHECK(std::get<std::string>(back.rows()[1][0]) == "with, comma \"q\"");
    CHECK(std::get<long long>(back.rows()[1][1]) == -7);
    CHECK(std::get<double>(back.rows()[0][2]) == doctest::Approx(0.1234567890123456).epsilon(1e-11));
    CHECK(std::holds_alternative<std::monostate>(back.rows()[0][3]));
    // Writing again is a fixed point.
    std::stringstream again;
    back.write_csv(again);
    std::stringstream first;
    t.write_csv(first);
    CHECK(again.str() == first.str());
  }

  TEST_CASE("JSON round trip") {
    const OutputTable t = sample();
    std::stringstream ss;
    t.write_json(ss);
    const OutputTable back = OutputTable::read_json(ss);
    CHECK(back.columns() == t.columns());
    REQUIRE(back.rows().size() == 3);
    CHECK(std::get<long long>(back.rows()[1][1]) == -7);
    CHECK(std::get<double>(back.rows()[1][2]) == doctest::Approx(1e-300));
    CHECK(std::get<double>(back.rows()[2][2]) == doctest::Approx(123456789012345.0).epsilon(5e-12));
    CHECK(std::holds_alternative<std::monostate>(back.rows()[0][3]));
    std::stringstream a, b;
    t.write_json(a);
    back.write_json(b);
    CHECK(a.str() == b.str());
  }

  TEST_CASE("non-finite numbers become empty cells") {
    OutputTable t({"x"});
    t.add_row({std::nan("")});
    std::stringstream ss;
    t.write_json(ss);
    CHECK(ss.str().find("null") != std::string::npos);
  }

  TEST_CASE("ragged and malformed tables") {
    OutputTable t({"a", "b"});
    CHECK_THROWS_AS(t.add_row({1LL}), DomainError);
    std::stringstream ragged("a,b\n1,2,3\n");
    CHECK_THROWS_AS(OutputTable::read_csv(ragged), IoError);
    std::stringstream empty("");
    CHECK_THROWS_AS(OutputTable::read_csv(empty), IoError);
    std::stringstream bad_json("{\"columns\": [\"a\"], \"rows\": [[1, 2]]}");
    CHECK_THROWS_AS(OutputTable::read_json(bad_json), IoError);
    std::stringstream not_json("columns: a");
    CHECK_THROWS_AS(OutputTable::read_json(not_json), IoError);
    CHECK(parse_format("json") == TableFormat::JSON);
    CHECK_THROWS_AS(parse_format("xml"), DomainError);
  }

  TEST_CASE("game records") {
    const std::vector<GameRecord> recs{{Player::A, {15, 3, Player::A}, 20},
                                       {Player::B, {7, 15, Player::B}, std::nullopt}};
    std::stringstream ss;
    write_records(ss, recs);
    CHECK(ss.str().find("\"first_server\":\"A\",\"alpha\":15") != std::string::npos);
    const auto back = read_records(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0].score == recs[0].score);
    CHECK(back[0].duration == 20);
    CHECK(back[1].first_server == Player::B);
    CHECK_FALSE(back[1].duration.has_value());

    std::stringstream blank_lines("\n{\"first_server\":\"b\",\"alpha\":1,\"beta\":15,\"last_scorer\":\"B\"}\n\n");
    CHECK(read_records(blank_lines).size() == 1);
  }

  TEST_CASE("malformed records report the line") {
    auto message = [](const std::string& text) {
      std::stringstream ss(text);
      try {
        (void)read_records(ss);
      } catch (const IoError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    const std::string good = "{\"first_server\":\"A\",\"alpha\":15,\"beta\":0,\"last_scorer\":\"A\"}\n";
    CHECK(message(good + "{not json}\n").rfind("line 2", 0) == 0);
    CHECK(message(good + good + "{\"first_server\":\"C\",\"alpha\":1,\"beta\":15,\"last_scorer\":\"B\"}").rfind("line 3", 0) == 0);
    CHECK(message("{\"first_server\":\"A\",\"beta\":0,\"last_scorer\":\"A\"}").rfind("line 1", 0) == 0);
    CHECK(message("{\"first_server\":\"A\",\"alpha\":\"x\",\"beta\":0,\"last_scorer\":\"A\"}").rfind("line 1", 0) == 0);
    CHECK_THROWS_AS(read_records_file("/nonexistent/records.jsonl"), IoError);
  }
}
