#include <limits>
#include <string>

#include <doctest.h>

#include "statsum/record.hpp"

using namespace statsum;

TEST_CASE("doubles render with 17 significant digits and round-trip") {
    CHECK(format_double(1.125) == "1.125");
    CHECK(format_double(0.1) == "0.10000000000000001");
    const double x = 0.61086430205489354;
    CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("records serialize deterministically in insertion order") {
    OutputRecord rec("tail");
    rec.add_input("z", 0.5);
    rec.add_input("M", (long long)2);
    rec.add_output("log_probability", -std::numeric_limits<double>::infinity());
    rec.add_output("note", std::string("empty event"));
    const std::string json = rec.to_json();
    CHECK(json ==
          "{\"schema_version\":1,\"command\":\"tail\","
          "\"inputs\":{\"z\":0.5,\"M\":2},"
          "\"outputs\":{\"log_probability\":\"-inf\",\"note\":\"empty event\"}}\n");
    CHECK(rec.to_json() == json);  // repeatable
    const std::string csv = rec.to_csv();
    CHECK(csv ==
          "schema_version,1\ncommand,tail\ninputs.z,0.5\ninputs.M,2\n"
          "outputs.log_probability,-inf\noutputs.note,empty event\n");
}
