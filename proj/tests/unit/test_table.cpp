#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "onebit/table.hpp"

using namespace onebit::report;

TEST(Table, RowArityChecked) {
    Table t("t", {{"x", "1"}, {"y", "nats"}});
    t.add_row({1.0, 2.0});
    EXPECT_EQ(t.rows(), 1u);
    EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
    EXPECT_EQ(t.column("y", "nats").values.front(), 2.0);
    EXPECT_THROW(t.column("y", "bits"), std::out_of_range);
}

TEST(FormatNumber, RoundTripsExactly) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 10000; ++i) {
        const double x = std::ldexp(mant(rng), expo(rng));
        EXPECT_EQ(std::stod(format_number(x)), x);
    }
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(NAN), "nan");
    EXPECT_EQ(format_number(100000.0), "100000");
    EXPECT_EQ(format_number(-0.0), "-0");
    EXPECT_EQ(format_number(1e20), "1e+20");
}

TEST(Csv, HeaderMetadataAndRoundTrip) {
    Table t("curve", {{"snr", "dB"}, {"rate", "nats"}, {"rate", "bits"}});
    t.add_row({0.0, 0.1234567890123456, 0.1234567890123456 / std::log(2.0)});
    t.add_row({10.0, 2.5, 2.5 / std::log(2.0)});
    std::ostringstream os;
    write_csv(os, t, "onebit test");
    const std::string text = os.str();
    EXPECT_EQ(text.rfind("# onebit test series=curve\n", 0), 0u);
    EXPECT_NE(text.find("snr[dB],rate[nats],rate[bits]\n"), std::string::npos);

    std::istringstream is(text);
    const Table back = read_csv(is);
    ASSERT_EQ(back.columns.size(), 3u);
    ASSERT_EQ(back.rows(), 2u);
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(back.columns[c].name, t.columns[c].name);
        EXPECT_EQ(back.columns[c].unit, t.columns[c].unit);
        for (std::size_t r = 0; r < 2; ++r) EXPECT_EQ(back.columns[c].values[r], t.columns[c].values[r]);
    }
}

TEST(Csv, PartialFlagInMetadata) {
    Table t("curve", {{"x", "1"}});
    t.partial = true;
    t.note = "budget";
    std::ostringstream os;
    write_csv(os, t, "m");
    EXPECT_NE(os.str().find("partial=1"), std::string::npos);
}

TEST(Json, MirrorsColumns) {
    Table t("curve", {{"x", "1"}, {"y", "probability"}});
    t.add_row({1.0, 0.25});
    t.add_row({2.0, NAN});
    std::ostringstream os;
    write_json(os, t, "meta");
    const auto doc = nlohmann::json::parse(os.str());
    EXPECT_EQ(doc["meta"], "meta");
    EXPECT_EQ(doc["columns"][1]["unit"], "probability");
    EXPECT_EQ(doc["columns"][1]["values"][0].get<double>(), 0.25);
    EXPECT_TRUE(doc["columns"][1]["values"][1].is_null());
}

TEST(Format, Parse) {
    EXPECT_EQ(parse_format("csv"), Format::csv);
    EXPECT_EQ(parse_format("json"), Format::json);
    EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}
