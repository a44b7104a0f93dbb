#include <doctest.h>

#include <cstdio>

#include "support.hpp"
#include "textable/normalize.hpp"

using namespace textable;

TEST_CASE("reference date examples") {
  CHECK(normalize_mention("DATE", "October 25, 1999") == CanonicalValue{CanonicalValue::Kind::date, "1999-10-25"});
  CHECK(normalize_mention("DATE", "25.10.1999") == CanonicalValue{CanonicalValue::Kind::date, "1999-10-25"});
}

TEST_CASE("date pattern table") {
  struct Case {
    const char* in;
    const char* out;
  };
  const Case cases[] = {
      {"October 25, 1999", "1999-10-25"}, {"Oct 25, 1999", "1999-10-25"},    {"Oct. 25 1999", "1999-10-25"},
      {"october 25th, 1999", "1999-10-25"}, {"25 October 1999", "1999-10-25"}, {"25. Oktober 1999", "1999-10-25"},
      {"1. März 2020", "2020-03-01"},       {"3 Sept 2001", "2001-09-03"},     {"25.10.1999", "1999-10-25"},
      {"1.2.2003", "2003-02-01"},           {"1999-10-25", "1999-10-25"},      {"2020-02-29", "2020-02-29"},
      {"10/25/1999", "1999-10-25"},         {"2/1/2003", "2003-02-01"},        {"December 31, 2000", "2000-12-31"},
      {"Jan 1, 2000", "2000-01-01"},        {"29.02.2000", "2000-02-29"},      {"15 Dezember 2021", "2021-12-15"},
      {"May 5, 1987", "1987-05-05"},        {"Juli 4, 1976", "1976-07-04"},
  };
  for (const auto& c : cases) {
    INFO(std::string(c.in));
    CHECK(parse_date(c.in) == std::optional<std::string>(c.out));
    CHECK(normalize_mention("DATE", c.in).value == c.out);
  }
}

TEST_CASE("invalid or unsupported dates fall back to text") {
  for (const char* s : {"next Tuesday", "31.02.2020", "1900-02-29", "13/01/2020", "2020-13-01", "October 32, 1999",
                        "25.10.99", "", "1999"}) {
    INFO(std::string(s));
    CHECK_FALSE(parse_date(s).has_value());
  }
  CHECK(normalize_mention("DATE", "next Tuesday") == CanonicalValue{CanonicalValue::Kind::text, "next Tuesday"});
  CHECK(normalize_mention("DATE", "  soon ") == CanonicalValue{CanonicalValue::Kind::text, "soon"});
}

TEST_CASE("canonical dates are fixed points") {
  testing::Gen g(99);
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  for (int i = 0; i < 2000; ++i) {
    const int y = 1800 + static_cast<int>(g.below(400));
    const int m = 1 + static_cast<int>(g.below(12));
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    const int d = 1 + static_cast<int>(g.below(static_cast<std::size_t>(days[m - 1] + (m == 2 && leap))));
    char iso[40], dotted[40], slashed[40];
    std::snprintf(iso, sizeof iso, "%04d-%02d-%02d", y, m, d);
    std::snprintf(dotted, sizeof dotted, "%d.%d.%d", d, m, y);
    std::snprintf(slashed, sizeof slashed, "%d/%d/%d", m, d, y);
    CHECK(parse_date(iso) == std::optional<std::string>(iso));
    CHECK(parse_date(dotted) == std::optional<std::string>(iso));
    CHECK(parse_date(slashed) == std::optional<std::string>(iso));
    const auto once = normalize_mention("DATE", iso);
    CHECK(normalize_mention("DATE", once.value) == once);
  }
}

TEST_CASE("find_dates locates dates in running text") {
  const std::string t = "Filed 1999-10-25, flown on October 25, 1999 and 25.10.1999; not 31.02.2020.";
  const auto found = find_dates(t);
  REQUIRE(found.size() == 3);
  CHECK(t.substr(found[0].start, found[0].end - found[0].start) == "1999-10-25");
  CHECK(t.substr(found[1].start, found[1].end - found[1].start) == "October 25, 1999");
  CHECK(t.substr(found[2].start, found[2].end - found[2].start) == "25.10.1999");
  for (const auto& f : found) CHECK(f.iso == "1999-10-25");
}

TEST_CASE("number normalization") {
  struct Case {
    const char* in;
    const char* out;
  };
  const Case ok[] = {{"1,234", "1234"},      {"1234", "1234"},         {"1,234.50", "1234.5"}, {"1.234,5", "1234.5"},
                     {"1.234.567,89", "1234567.89"}, {"12,5", "12.5"}, {"0.25", "0.25"},       {"007", "7"},
                     {"-3", "-3"},           {"-0", "0"},              {"1.234", "1.234"},     {"2.000", "2"},
                     {"1,000,000", "1000000"}, {"0", "0"}, {"1,23", "1.23"}};
  for (const auto& c : ok) {
    INFO(std::string(c.in));
    CHECK(parse_number(c.in) == std::optional<std::string>(c.out));
  }
  for (const char* bad : {"", "abc", "1,2345", "12,34,5", "1.2.3", "1,234,5678", ",5", "1.", "--1"}) {
    INFO(std::string(bad));
    CHECK_FALSE(parse_number(bad).has_value());
  }
  CHECK(normalize_mention("NUMBER", "1,234") == CanonicalValue{CanonicalValue::Kind::number, "1234"});
  CHECK(normalize_mention("CARDINAL", "12,5") == CanonicalValue{CanonicalValue::Kind::number, "12.5"});
  CHECK(normalize_mention("NUMBER", "many") == CanonicalValue{CanonicalValue::Kind::text, "many"});
  CHECK(normalize_mention("ORG", " US Airways ") == CanonicalValue{CanonicalValue::Kind::text, "US Airways"});
  CHECK(normalize_mention("ORG", "1,234").kind == CanonicalValue::Kind::text);
}

TEST_CASE("kind names") {
  for (auto k : {CanonicalValue::Kind::date, CanonicalValue::Kind::number, CanonicalValue::Kind::text}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_kind("nope").has_value());
}
