#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "abelkit/format.hpp"
#include "support.hpp"

using namespace abelkit;

TEST_CASE("shortest round-trip numbers") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  for (int i = 0; i < 1000; ++i) {
    const double v = testing::uniform(-1, 1) * std::pow(10.0, testing::uniform(-20, 20));
    const std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    std::string mantissa;
    for (char c : s) {
      if (c == 'e') break;
      if (c >= '0' && c <= '9') mantissa += c;
    }
    mantissa.erase(0, mantissa.find_first_not_of('0'));
    mantissa.erase(mantissa.find_last_not_of('0') + 1);
    CHECK(mantissa.size() <= 17);
  }
}

TEST_CASE("csv and json tables") {
  Table t{{"kind", "x", "n"}, {}};
  t.add({std::string("a,b"), 0.5, 3LL});
  t.add({std::string("plain"), -0.0, -1LL});
  CHECK(t.to_csv() == "kind,x,n\n\"a,b\",0.5,3\nplain,0,-1\n");
  const auto j = t.to_json();
  CHECK(j["columns"].size() == 3);
  CHECK(j["rows"][0][1].get<double>() == 0.5);
  CHECK(j.dump().find("-0") == std::string::npos);
  CHECK_THROWS(t.add({1.0}));
}

TEST_CASE("non-finite json numbers are null") {
  CHECK(json_number(NAN).is_null());
  CHECK(json_number(INFINITY).is_null());
  CHECK(json_number(2.5).get<double>() == 2.5);
}
