#include <sstream>
#include <vector>

#include "doctest.h"
#include "wismc/ingest.hpp"

using namespace wismc;

namespace {

TickSeries ticks_of(std::vector<std::int64_t> times, std::vector<double> prices) {
    TickSeries t;
    t.times = std::move(times);
    t.prices = std::move(prices);
    t.session_starts = {0};
    return t;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("parse_ticks: minimal well-formed input") {
    std::istringstream in("timestamp,price\n1167730860,7.125\n1167730920,7.130\n");
    const TickSeries t = parse_ticks(in);
    REQUIRE(t.size() == 2);
    CHECK(t.times[0] == 1167730860);
    CHECK(t.times[1] == 1167730920);
    CHECK(t.prices[0] == 7.125);
    CHECK(t.prices[1] == 7.130);
    CHECK(t.session_starts == std::vector<std::size_t>{0});
}

TEST_CASE("parse_ticks: ISO-8601 timestamps") {
    std::istringstream in(
        "timestamp,price\n"
        "1970-01-01T00:01:00,10\n"
        "1970-01-01 00:02:30Z,11\n"
        "1970-01-02T00:00:00,12\n");
    const TickSeries t = parse_ticks(in);
    REQUIRE(t.size() == 3);
    CHECK(t.times[0] == 60);
    CHECK(t.times[1] == 150);
    CHECK(t.times[2] == 86400);
}

TEST_CASE("parse_timestamp accepts epoch integers") {
    CHECK(parse_timestamp("0", 2) == 0);
    CHECK(parse_timestamp("1167730860", 2) == 1167730860);
    CHECK(parse_timestamp("2007-01-02T09:01:00", 2) ==
          parse_timestamp("2007-01-02 09:01:00Z", 3));
    CHECK_THROWS_AS(parse_timestamp("yesterday", 7), MalformedRow);
}

TEST_CASE("parse_ticks: defined errors with 1-based line numbers") {
    std::istringstream backwards("timestamp,price\n100,10\n90,11\n");
    CHECK_THROWS_WITH_AS(parse_ticks(backwards), "timestamp decreases at line 3",
                         NonMonotoneTime);

    std::istringstream zero_price("timestamp,price\n100,0\n");
    try {
        parse_ticks(zero_price);
        FAIL("expected NonPositivePrice");
    } catch (const NonPositivePrice& e) {
        CHECK(e.line == 2);
    }

    std::istringstream garbage("timestamp,price\n100,ten\n");
    CHECK_THROWS_AS(parse_ticks(garbage), MalformedRow);

    std::istringstream short_row("timestamp,price\n100\n");
    CHECK_THROWS_AS(parse_ticks(short_row), MalformedRow);

    std::istringstream no_header("100,10\n");
    CHECK_THROWS_AS(parse_ticks(no_header), MalformedRow);

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_ticks(empty), DataError);
}

TEST_CASE("parse_ticks: session column partitions the series") {
    std::istringstream in(
        "timestamp,price,session\n"
        "60,10,a\n"
        "120,11,a\n"
        "86400,12,b\n"
        "86460,13,b\n");
    const TickSeries t = parse_ticks(in);
    REQUIRE(t.size() == 4);
    CHECK(t.session_starts == std::vector<std::size_t>{0, 2});
}

TEST_CASE("resample: previous-tick rule") {
    // Ticks at 0 s (10) and 90 s (11), one-minute grid.
    const PriceGrid g = resample(ticks_of({0, 90}, {10.0, 11.0}), 60);
    CHECK(g.start == 0);
    CHECK(g.step == 60);
    CHECK(g.prices == std::vector<double>{10.0, 10.0, 11.0});
}

TEST_CASE("resample: single tick and on-grid passthrough") {
    const PriceGrid single = resample(ticks_of({70}, {10.0}), 60);
    CHECK(single.prices == std::vector<double>{10.0});
    CHECK(single.start == 120);

    const PriceGrid exact = resample(ticks_of({0, 60, 120}, {1.0, 2.0, 3.0}), 60);
    CHECK(exact.start == 0);
    CHECK(exact.prices == std::vector<double>{1.0, 2.0, 3.0});

    CHECK_THROWS_AS(resample(TickSeries{}, 60), EmptyInput);
}

TEST_CASE("compute_returns: definition and hand-checked values") {
    PriceGrid g;
    g.start = 0;
    g.step = 60;
    g.prices = {100.0, 101.0};
    const ReturnSeries r = compute_returns(g);
    REQUIRE(r.values.size() == 1);
    CHECK(r.values[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(r.start_time == 0);
    CHECK(r.step == 60);

    g.prices = {100.0, 101.0, 99.99};
    const ReturnSeries r2 = compute_returns(g);
    REQUIRE(r2.values.size() == 2);
    CHECK(r2.values[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(r2.values[1] == doctest::Approx(-0.01).epsilon(1e-12));

    g.prices = {5.0, 5.0, 5.0, 5.0};
    for (double v : compute_returns(g).values) CHECK(v == 0.0);

    g.prices = {5.0};
    CHECK_THROWS_AS(compute_returns(g), EmptyInput);
}

TEST_CASE("returns are scale-invariant") {
    PriceGrid a;
    a.prices = {100.0, 100.5, 99.8, 101.2, 100.9};
    PriceGrid b = a;
    for (double& p : b.prices) p *= 37.5;
    const auto ra = compute_returns(a).values;
    const auto rb = compute_returns(b).values;
    REQUIRE(ra.size() == rb.size());
    for (std::size_t k = 0; k < ra.size(); ++k)
        CHECK(ra[k] == doctest::Approx(rb[k]).epsilon(1e-12));
}

TEST_CASE("resample-then-return of a constant price stream is zero") {
    const TickSeries t = ticks_of({5, 100, 333, 1000, 5000}, {7.0, 7.0, 7.0, 7.0, 7.0});
    for (std::int64_t step : {30, 60, 300}) {
        const auto returns = ingest_returns(t, step);
        for (double r : returns) CHECK(r == 0.0);
    }
}

TEST_CASE("ingest_returns: sessions never produce cross-boundary returns") {
    // Session one: prices 100 -> 101 over two minutes. Session two starts at a
    // wildly different price; the jump must not appear in the returns.
    TickSeries t;
    t.times = {0, 60, 86400, 86460};
    t.prices = {100.0, 101.0, 200.0, 202.0};
    t.session_starts = {0, 2};
    const auto returns = ingest_returns(t, 60);
    REQUIRE(returns.size() == 2);
    CHECK(returns[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(returns[1] == doctest::Approx(0.01).epsilon(1e-12));
    for (double r : returns) CHECK(r < 0.5);  // no session-jump return anywhere
}

TEST_CASE("ingest_returns skips sessions too short for a single return") {
    TickSeries t;
    t.times = {0, 60, 5000, 10000, 10060};
    t.prices = {100.0, 101.0, 55.0, 70.0, 70.7};
    t.session_starts = {0, 2, 3};  // middle session has one tick -> one grid point
    const auto returns = ingest_returns(t, 60);
    REQUIRE(returns.size() == 2);
    CHECK(returns[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(returns[1] == doctest::Approx(0.01).epsilon(1e-12));
}

}  // TEST_SUITE
