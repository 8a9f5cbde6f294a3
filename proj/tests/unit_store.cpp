#include "vcm/store.hpp"

#include "tmpdir.hpp"

#include <doctest.h>

using namespace vcm;
using vcm::test::TempDir;

TEST_CASE("schema header grammar") {
    auto header = parse_schema_header("{\"schema\":\"records/1\"}");
    REQUIRE(header);
    CHECK(header->name == "records");
    CHECK(header->version == 1);
    CHECK(kRecordsSchema.header_line() == "{\"schema\":\"records/1\"}");

    CHECK_FALSE(parse_schema_header("{\"schema\":\"records\"}"));
    CHECK_FALSE(parse_schema_header("{\"schema\":\"/1\"}"));
    CHECK_FALSE(parse_schema_header("{\"schema\":\"records/x\"}"));
    CHECK_FALSE(parse_schema_header("{\"other\":\"records/1\"}"));
    CHECK_FALSE(parse_schema_header("{\"schema\":\"records/1\",\"extra\":1}"));
    CHECK_FALSE(parse_schema_header("not json"));
}

TEST_CASE("validate a clean records file") {
    TempDir tmp;
    tmp.write("records.ndjson",
              "{\"schema\":\"records/1\"}\n"
              "{\"commit\":\"abc0\",\"repo\":\"demo\",\"language\":\"Python\","
              "\"date\":\"2018-06-11T00:00:00Z\",\"cwes\":[79],\"direct_cwes\":[],"
              "\"resolved_cves\":[\"CVE-2018-0001\"],\"unresolved_cves\":[]}\n");
    auto report = validate_file(tmp.file("records.ndjson"), kRecordsSchema);
    CHECK(report.ok());
    CHECK(report.data_lines == 1);
}

TEST_CASE("violations name their line") {
    TempDir tmp;
    tmp.write("records.ndjson",
              "{\"schema\":\"records/1\"}\n"
              "{\"commit\":\"abc0\",\"repo\":\"demo\",\"language\":\"Python\","
              "\"date\":\"2018-06-11T00:00:00Z\",\"cwes\":[79],\"direct_cwes\":[],"
              "\"resolved_cves\":[],\"unresolved_cves\":[]}\n"
              "{\"commit\":\"abc1\",\"repo\":\"demo\",\"langu\n");
    auto report = validate_file(tmp.file("records.ndjson"), kRecordsSchema);
    CHECK(report.header_ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].line == 3);
}

TEST_CASE("header defects") {
    TempDir tmp;

    tmp.write("v2.ndjson", "{\"schema\":\"records/2\"}\n");
    auto report = validate_file(tmp.file("v2.ndjson"), kRecordsSchema);
    CHECK_FALSE(report.ok());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].line == 1);
    CHECK(report.violations[0].message.find("unknown major") != std::string::npos);

    tmp.write("wrong.ndjson", "{\"schema\":\"nvd-cache/1\"}\n");
    CHECK_FALSE(validate_file(tmp.file("wrong.ndjson"), kRecordsSchema).ok());

    tmp.write("empty.ndjson", "");
    CHECK_FALSE(validate_file(tmp.file("empty.ndjson"), kRecordsSchema).ok());

    tmp.write("noheader.ndjson", "{\"commit\":\"abc\"}\n");
    CHECK_FALSE(validate_file(tmp.file("noheader.ndjson"), kRecordsSchema).ok());

    CHECK_THROWS(validate_file(tmp.file("absent.ndjson"), kRecordsSchema));
}

TEST_CASE("records line checks catch the invariants") {
    TempDir tmp;
    std::string header = "{\"schema\":\"records/1\"}\n";

    // direct_cwes must be a subset of cwes
    tmp.write("subset.ndjson", header +
              "{\"commit\":\"a\",\"repo\":\"r\",\"language\":\"Python\","
              "\"date\":\"2018-06-11T00:00:00Z\",\"cwes\":[79],\"direct_cwes\":[200],"
              "\"resolved_cves\":[],\"unresolved_cves\":[]}\n");
    CHECK_FALSE(validate_file(tmp.file("subset.ndjson"), kRecordsSchema).ok());

    // resolved and unresolved lists must stay disjoint
    tmp.write("disjoint.ndjson", header +
              "{\"commit\":\"a\",\"repo\":\"r\",\"language\":\"Python\","
              "\"date\":\"2018-06-11T00:00:00Z\",\"cwes\":[],\"direct_cwes\":[],"
              "\"resolved_cves\":[\"CVE-2018-0001\"],\"unresolved_cves\":[\"CVE-2018-0001\"]}\n");
    CHECK_FALSE(validate_file(tmp.file("disjoint.ndjson"), kRecordsSchema).ok());

    // a record with no references at all is not a record
    tmp.write("norefs.ndjson", header +
              "{\"commit\":\"a\",\"repo\":\"r\",\"language\":\"Python\","
              "\"date\":\"2018-06-11T00:00:00Z\",\"cwes\":[],\"direct_cwes\":[],"
              "\"resolved_cves\":[],\"unresolved_cves\":[]}\n");
    CHECK_FALSE(validate_file(tmp.file("norefs.ndjson"), kRecordsSchema).ok());

    // CWE numbers outside 1..9999
    tmp.write("badcwe.ndjson", header +
              "{\"commit\":\"a\",\"repo\":\"r\",\"language\":\"Python\","
              "\"date\":\"2018-06-11T00:00:00Z\",\"cwes\":[0],\"direct_cwes\":[],"
              "\"resolved_cves\":[],\"unresolved_cves\":[]}\n");
    CHECK_FALSE(validate_file(tmp.file("badcwe.ndjson"), kRecordsSchema).ok());

    // unknown language name
    tmp.write("badlang.ndjson", header +
              "{\"commit\":\"a\",\"repo\":\"r\",\"language\":\"Perl\","
              "\"date\":\"2018-06-11T00:00:00Z\",\"cwes\":[79],\"direct_cwes\":[],"
              "\"resolved_cves\":[],\"unresolved_cves\":[]}\n");
    CHECK_FALSE(validate_file(tmp.file("badlang.ndjson"), kRecordsSchema).ok());
}

TEST_CASE("cache line checks") {
    TempDir tmp;
    std::string header = "{\"schema\":\"nvd-cache/1\"}\n";

    tmp.write("ok.ndjson", header +
              "{\"id\":\"CVE-2019-0001\",\"published\":\"2019-01-02T12:00:00Z\","
              "\"cwes\":[79],\"severity\":\"HIGH\",\"impact\":5.9}\n"
              "{\"id\":\"CVE-2019-0002\",\"published\":\"2019-03-04T16:29:00Z\","
              "\"cwes\":[],\"severity\":\"UNKNOWN\",\"impact\":null}\n");
    CHECK(validate_file(tmp.file("ok.ndjson"), kNvdCacheSchema).ok());

    tmp.write("badsev.ndjson", header +
              "{\"id\":\"CVE-2019-0001\",\"published\":\"2019-01-02T12:00:00Z\","
              "\"cwes\":[],\"severity\":\"SEVERE\",\"impact\":null}\n");
    CHECK_FALSE(validate_file(tmp.file("badsev.ndjson"), kNvdCacheSchema).ok());

    tmp.write("badimpact.ndjson", header +
              "{\"id\":\"CVE-2019-0001\",\"published\":\"2019-01-02T12:00:00Z\","
              "\"cwes\":[],\"severity\":\"LOW\",\"impact\":11.0}\n");
    CHECK_FALSE(validate_file(tmp.file("badimpact.ndjson"), kNvdCacheSchema).ok());

    tmp.write("dupcwe.ndjson", header +
              "{\"id\":\"CVE-2019-0001\",\"published\":\"2019-01-02T12:00:00Z\","
              "\"cwes\":[79,79],\"severity\":\"LOW\",\"impact\":null}\n");
    CHECK_FALSE(validate_file(tmp.file("dupcwe.ndjson"), kNvdCacheSchema).ok());
}

TEST_CASE("commits line checks") {
    TempDir tmp;
    std::string header = "{\"schema\":\"commits/1\"}\n";

    tmp.write("ok.ndjson", header +
              "{\"repo\":\"r\",\"id\":\"abc123\",\"author_date\":\"2018-01-01T00:00:00Z\","
              "\"committer_date\":\"2018-01-01T00:00:00Z\",\"message\":\"m\","
              "\"root\":[\"setup.py\"]}\n");
    CHECK(validate_file(tmp.file("ok.ndjson"), kCommitsSchema).ok());

    tmp.write("badid.ndjson", header +
              "{\"repo\":\"r\",\"id\":\"not-hex!\",\"author_date\":\"2018-01-01T00:00:00Z\","
              "\"committer_date\":\"2018-01-01T00:00:00Z\",\"message\":\"m\",\"root\":[]}\n");
    CHECK_FALSE(validate_file(tmp.file("badid.ndjson"), kCommitsSchema).ok());

    tmp.write("missing.ndjson", header +
              "{\"repo\":\"r\",\"id\":\"abc123\",\"author_date\":\"2018-01-01T00:00:00Z\","
              "\"committer_date\":\"2018-01-01T00:00:00Z\",\"message\":\"m\"}\n");
    auto report = validate_file(tmp.file("missing.ndjson"), kCommitsSchema);
    CHECK_FALSE(report.ok());
    CHECK(report.violations[0].message.find("root") != std::string::npos);
}

TEST_CASE("atomic_write leaves no temp files and replaces content") {
    TempDir tmp;
    auto target = tmp.file("out/data.txt");
    atomic_write(target, [](std::ostream& out) { out << "first\n"; });
    CHECK(read_file(target) == "first\n");
    atomic_write(target, [](std::ostream& out) { out << "second\n"; });
    CHECK(read_file(target) == "second\n");

    size_t files = 0;
    for (auto& entry : std::filesystem::directory_iterator(tmp.file("out")))
        files += entry.is_regular_file() ? 1 : 0;
    CHECK(files == 1);
}
