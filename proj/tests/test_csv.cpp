#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "leakaudit/csv.hpp"
#include "leakaudit/errors.hpp"

using namespace leakaudit;
using testutil::TempDir;
using testutil::write_text;

TEST_CASE("reads plain rows by column name") {
    TempDir dir("csv");
    const auto path = dir.file("t.csv");
    write_text(path, "a,b,c\n1,2,3\n4,5,6\n");
    CsvReader r(path);
    CHECK(r.header() == std::vector<std::string>{"a", "b", "c"});
    CHECK(r.has_column("b"));
    CHECK_FALSE(r.has_column("z"));
    REQUIRE(r.next());
    CHECK(*r.field("a") == "1");
    CHECK(*r.field("c") == "3");
    REQUIRE(r.next());
    CHECK(*r.field("b") == "5");
    CHECK_FALSE(r.next());
}

TEST_CASE("quoted fields carry commas, quotes and newlines") {
    TempDir dir("csv");
    const auto path = dir.file("t.csv");
    write_text(path, "a,b\n\"x,y\",\"he said \"\"hi\"\"\"\n\"line1\nline2\",plain\n");
    CsvReader r(path);
    REQUIRE(r.next());
    CHECK(*r.field("a") == "x,y");
    CHECK(*r.field("b") == "he said \"hi\"");
    REQUIRE(r.next());
    CHECK(*r.field("a") == "line1\nline2");
    CHECK(*r.field("b") == "plain");
    CHECK_FALSE(r.next());
}

TEST_CASE("CRLF line endings are stripped") {
    TempDir dir("csv");
    const auto path = dir.file("t.csv");
    write_text(path, "a,b\r\n1,2\r\n");
    CsvReader r(path);
    REQUIRE(r.next());
    CHECK(*r.field("a") == "1");
    CHECK(*r.field("b") == "2");
}

TEST_CASE("short records report missing fields as absent") {
    TempDir dir("csv");
    const auto path = dir.file("t.csv");
    write_text(path, "a,b,c\n1,2\n");
    CsvReader r(path);
    REQUIRE(r.next());
    CHECK(*r.field("a") == "1");
    CHECK_FALSE(r.field("c").has_value());
    CHECK_FALSE(r.field("nope").has_value());
}

TEST_CASE("record_line points at the row start even across embedded newlines") {
    TempDir dir("csv");
    const auto path = dir.file("t.csv");
    write_text(path, "a\n\"x\ny\"\nz\n");
    CsvReader r(path);
    REQUIRE(r.next());
    CHECK(r.record_line() == 2);
    REQUIRE(r.next());
    CHECK(r.record_line() == 4);
}

TEST_CASE("missing file raises an input error") {
    CHECK_THROWS_AS(CsvReader("/nonexistent/nope.csv"), IoError);
}

TEST_CASE("csv_quote quotes only when needed") {
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("") == "");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_quote("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("write then read round-trips awkward fields") {
    TempDir dir("csv");
    const auto path = dir.file("t.csv");
    std::ostringstream out;
    write_csv_row(out, {"id", "body"});
    write_csv_row(out, {"1", "a,b \"q\"\nnext"});
    write_text(path, out.str());

    CsvReader r(path);
    REQUIRE(r.next());
    CHECK(*r.field("id") == "1");
    CHECK(*r.field("body") == "a,b \"q\"\nnext");
}
