#include <doctest.h>

#include <algorithm>
#include <random>

#include "chronolens/error.hpp"
#include "chronolens/object_features.hpp"
#include "fixtures.hpp"

using namespace chronolens;

namespace {

const std::string kHeader = "image_id,label,confidence,x1,y1,x2,y2\n";

FilterConfig permissive() {
  FilterConfig c;
  c.min_class_count = 0;
  return c;
}

std::vector<DetectionRecord> many(const std::string& label, std::size_t n, double conf) {
  std::vector<DetectionRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"img_" + std::to_string(i % 50), label, conf, {}});
  return out;
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("img_" + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("detection rows parse with and without a bbox") {
  const auto set = parse_detections(kHeader + "img_1,person,0.95,,,,\nimg_2,car,0.9,1,2,3,4\n");
  REQUIRE(set.records.size() == 2);
  CHECK(set.records[0].image_id == "img_1");
  CHECK(set.records[0].label == "person");
  CHECK(set.records[0].confidence == 0.95);
  CHECK_FALSE(set.records[0].bbox);
  REQUIRE(set.records[1].bbox);
  CHECK((*set.records[1].bbox)[3] == 4.0);
}

TEST_CASE("bad detection rows are rejected with reasons") {
  const auto set = parse_detections(kHeader +
                                    "a,person,1.2,,,,\n"
                                    "b,person,-0.1,,,,\n"
                                    "c,person,high,,,,\n"
                                    "d,person,0.9,1,2,,\n"
                                    "e,,0.9,,,,\n"
                                    "f,dog,0.9,,,,\n");
  CHECK(set.records.size() == 1);
  REQUIRE(set.rejected.size() == 5);
  CHECK(set.rejected[0].line == 2);
  CHECK(set.rejected[0].reason.find("1.2") != std::string::npos);
}

TEST_CASE("header-only file is empty; bad header or missing file is an error") {
  CHECK(parse_detections(kHeader).records.empty());
  CHECK_THROWS_AS(parse_detections("image_id,label,score\n"), DataError);
  CHECK_THROWS_AS(load_detections("/nonexistent/detections.csv"), DataError);
}

TEST_CASE("confidence threshold is strict") {
  const std::vector<std::string> images{"img_1"};
  std::vector<DetectionRecord> at{{"img_1", "person", 0.80, {}}};
  auto r = build_presence(at, images, permissive());
  CHECK(r.matrix.cols() == 0);

  std::vector<DetectionRecord> above{{"img_1", "person", 0.81, {}}};
  r = build_presence(above, images, permissive());
  REQUIRE(r.matrix.classes == std::vector<std::string>{"person"});
  CHECK(r.matrix.at(0, 0) == 1);
}

TEST_CASE("class count threshold is strict") {
  const auto images = ids(50);
  auto exactly = many("person", 200, 0.9);
  CHECK(build_presence(exactly, images, {}).matrix.cols() == 0);
  auto more = many("person", 201, 0.9);
  CHECK(build_presence(more, images, {}).matrix.classes == std::vector<std::string>{"person"});
}

TEST_CASE("image-level counting is a one-flag change") {
  const auto images = ids(50);
  auto dets = many("dog", 300, 0.9);  // 300 detections over 50 images
  FilterConfig config;
  CHECK(build_presence(dets, images, config).matrix.cols() == 1);
  config.count_mode = ClassCountMode::images;
  CHECK(build_presence(dets, images, config).matrix.cols() == 0);
  config.min_class_count = 49;
  CHECK(build_presence(dets, images, config).matrix.cols() == 1);
}

TEST_CASE("focus order, non-focus classes and empty images") {
  std::vector<DetectionRecord> d{{"a", "person", 0.9, {}},
                                 {"a", "tie", 0.99, {}},
                                 {"b", "bicycle", 0.9, {}},
                                 {"b", "person", 0.95, {}}};
  const std::vector<std::string> images{"a", "b", "c"};
  const auto r = build_presence(d, images, permissive());
  CHECK(r.matrix.classes == std::vector<std::string>{"bicycle", "person"});
  CHECK(r.matrix.column(0) == std::vector<std::uint8_t>{0, 1, 0});
  CHECK(r.matrix.column(1) == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(r.matrix.provenance.min_class_count == 0);
}

TEST_CASE("retained class absent from the listed images warns and keeps zeros") {
  std::vector<DetectionRecord> d{{"elsewhere", "horse", 0.9, {}}, {"a", "person", 0.9, {}}};
  const std::vector<std::string> images{"a"};
  const auto r = build_presence(d, images, permissive());
  REQUIRE(r.matrix.classes == std::vector<std::string>{"horse", "person"});
  CHECK(r.matrix.column(0) == std::vector<std::uint8_t>{0});
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("horse") != std::string::npos);
}

TEST_CASE("build_presence argument checks") {
  std::vector<DetectionRecord> d;
  CHECK_THROWS_AS(build_presence(d, std::vector<std::string>{}, {}), std::invalid_argument);
  const std::vector<std::string> images{"a"};
  FilterConfig bad;
  bad.confidence_threshold = 1.0;
  CHECK_THROWS_AS(build_presence(d, images, bad), std::invalid_argument);
}

TEST_CASE("presence properties on random detections") {
  std::mt19937_64 rng(60);
  const auto& focus = default_focus_classes();
  std::vector<std::string> labels(focus.begin(), focus.end());
  labels.push_back("tie");
  labels.push_back("umbrella");
  for (int trial = 0; trial < 30; ++trial) {
    const auto images = ids(40);
    std::vector<DetectionRecord> d;
    std::uniform_real_distribution<double> conf(0.5, 1.0);
    for (int k = 0; k < 600; ++k) {
      d.push_back({images[rng() % images.size()], labels[rng() % labels.size()], conf(rng), {}});
    }
    FilterConfig config;
    config.min_class_count = rng() % 60;
    const auto base = build_presence(d, images, config).matrix;

    CHECK(base.cols() <= focus.size());
    for (const auto& c : base.classes) {
      CHECK(std::find(focus.begin(), focus.end(), c) != focus.end());
    }
    for (auto v : base.presence) CHECK(v <= 1);

    // brute-force column definition
    for (std::size_t c = 0; c < base.cols(); ++c) {
      for (std::size_t i = 0; i < base.rows(); ++i) {
        const bool expected = std::any_of(d.begin(), d.end(), [&](const DetectionRecord& r) {
          return r.image_id == base.image_ids[i] && r.label == base.classes[c] &&
                 r.confidence > config.confidence_threshold;
        });
        CHECK(base.at(i, c) == (expected ? 1 : 0));
      }
    }

    auto shuffled = d;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = build_presence(shuffled, images, config).matrix;
    CHECK(again.classes == base.classes);
    CHECK(again.presence == base.presence);

    // raising the threshold only clears entries of columns that survive
    auto stricter = config;
    stricter.confidence_threshold = 0.9;
    const auto high = build_presence(d, images, stricter).matrix;
    for (std::size_t c = 0; c < high.cols(); ++c) {
      const auto it = std::find(base.classes.begin(), base.classes.end(), high.classes[c]);
      REQUIRE(it != base.classes.end());
      const auto bc = static_cast<std::size_t>(it - base.classes.begin());
      for (std::size_t i = 0; i < high.rows(); ++i) {
        if (high.at(i, c)) CHECK(base.at(i, bc) == 1);
      }
    }
  }
}

TEST_CASE("presence CSV round-trips") {
  fixture::TempDir dir("presence");
  std::vector<DetectionRecord> d{{"a", "person", 0.9, {}}, {"b", "dog", 0.9, {}}};
  const std::vector<std::string> images{"a", "b", "c"};
  const auto m = build_presence(d, images, permissive()).matrix;
  write_presence(dir / "p.csv", m);
  const auto back = read_presence(dir / "p.csv");
  CHECK(back.image_ids == m.image_ids);
  CHECK(back.classes == m.classes);
  CHECK(back.presence == m.presence);
  CHECK(format_presence(m) == "image_id,dog,person\na,0,1\nb,1,0\nc,0,0\n");
}
