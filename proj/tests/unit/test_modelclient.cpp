#include <doctest.h>

#include <future>
#include <thread>

#include "robulink/imgcore/image_io.hpp"
#include "robulink/modelclient/client.hpp"
#include "robulink/modelclient/inference.hpp"
#include "support.hpp"

using namespace robulink;
using nlohmann::json;

namespace {

Endpoint mock_endpoint(const std::string& name = "mock-a", int in_flight = 4) {
    Endpoint e;
    e.name = name;
    e.max_in_flight = in_flight;
    e.backoff_initial_s = 0.5;
    return e;
}

struct Fixture {
    testing::ScratchDir dir{"infer"};
    std::vector<Sample> samples;
    std::vector<DistortedRecord> records;

    Fixture() {
        for (int i = 0; i < 2; ++i) {
            Sample s;
            s.id = "s" + std::to_string(i);
            s.task = Task::MCQ;
            s.image_path = s.id + ".png";
            s.question = "Which?";
            s.choices = {{"A", "x"}, {"B", "y"}};
            s.gt_answer = "A";
            s.image_file = dir / s.image_path;
            write_image(testing::corpus()[i], s.image_file);
            samples.push_back(s);
        }
        const std::pair<int, int> recs[] = {{0, 9}, {0, 16}, {1, 9}};
        for (auto [i, d] : recs) {
            DistortedRecord r{samples[i].id, d, Strength::Low, 1, record_image_path(samples[i].id, d, Strength::Low), false};
            write_image(testing::corpus()[i + 5], dir / "set" / r.image_path);
            records.push_back(r);
        }
    }
};

}  // namespace

TEST_SUITE("modelclient") {

TEST_CASE("sha256 and base64") {
    CHECK(sha256_hex(std::string_view("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(base64_encode({'M', 'a', 'n'}) == "TWFu");
    CHECK(base64_encode({'M', 'a'}) == "TWE=");
}

TEST_CASE("endpoint config never carries credentials") {
    CHECK_THROWS_AS(endpoint_from_json(json::parse(R"({"name":"x","api_key":"sk-1"})")), std::invalid_argument);
    const Endpoint e = endpoint_from_json(json::parse(
        R"({"name":"gpt","kind":"openai","base_url":"https://example.invalid/v1","credential_env":"MY_KEY","temperature":0})"));
    CHECK(e.is_network());
    CHECK(e.temperature == 0.0);
    const json back = endpoint_to_json(e);
    CHECK(back["credential_env"] == "MY_KEY");
    CHECK_FALSE(back.contains("api_key"));
    CHECK(endpoint_from_json(back).base_url == e.base_url);
}

TEST_CASE("chat request body and response parsing") {
    Endpoint e = mock_endpoint();
    e.model = "m-1";
    const json body = chat_request_body(e, {"s", "reference", "Say hi", {1, 2, 3}});
    CHECK(body["model"] == "m-1");
    CHECK_FALSE(body.contains("temperature"));
    const std::string url = body["messages"][0]["content"][1]["image_url"]["url"];
    CHECK(url == "data:image/png;base64,AQID");
    CHECK(parse_chat_response(R"({"choices":[{"message":{"content":"B"}}]})") == "B");
    CHECK_THROWS(parse_chat_response(R"({"error":"x"})"));
}

TEST_CASE("mock answers and cache contract") {
    auto mock = std::make_shared<MockTransport>();
    mock->set_answer("sample_7", {"B", "B"});
    ModelClient client(mock_endpoint(), mock);
    const ImageBuffer img = testing::corpus()[0];
    CHECK(client.ask_text(img, "p", "sample_7", std::string(kReferenceKey)) == "B");
    CHECK(mock->calls() == 1);
    // second ask is served from the cache
    CHECK(client.ask_text(img, "p", "sample_7", std::string(kReferenceKey)) == "B");
    CHECK(mock->calls() == 1);

    auto cache = std::make_shared<ExchangeCache>();
    Exchange pre{"mock-a", "k", "16-jpeg@mid", "prompt", "", "cached text", "t", 1};
    cache->append(pre);
    ModelClient warm(mock_endpoint(), mock, cache);
    CHECK(warm.ask_text(img, "prompt", "k", "16-jpeg@mid") == "cached text");
    CHECK(mock->calls() == 1);
    CHECK_THROWS_AS(warm.ask_text(img, "prompt", "unknown", "reference"), InferenceError);
}

TEST_CASE("mock overrides and defaults") {
    auto mock = MockTransport::from_json(json::parse(
        R"({"responses":{"a":{"reference":"A","distorted":"B"},"b":"C","a@9-white_noise@low":"D"},"default":"Z"})"));
    ModelClient client(mock_endpoint(), mock);
    const ImageBuffer img = testing::corpus()[0];
    CHECK(client.ask_text(img, "p", "a", "reference") == "A");
    CHECK(client.ask_text(img, "p", "a", "16-jpeg@low") == "B");
    CHECK(client.ask_text(img, "p", "a", "9-white_noise@low") == "D");
    CHECK(client.ask_text(img, "p", "b", "16-jpeg@low") == "C");
    CHECK(client.ask_text(img, "p", "zzz", "reference") == "Z");
}

TEST_CASE("concurrent asks for one key make a single call") {
    auto mock = std::make_shared<MockTransport>();
    mock->set_default("same");
    mock->set_delay(std::chrono::milliseconds(150));
    ModelClient client(mock_endpoint(), mock);
    const ImageBuffer img = testing::corpus()[0];
    auto f1 = std::async(std::launch::async, [&] { return client.ask_text(img, "p", "s", "reference"); });
    auto f2 = std::async(std::launch::async, [&] { return client.ask_text(img, "p", "s", "reference"); });
    CHECK(f1.get() == "same");
    CHECK(f2.get() == "same");
    CHECK(mock->calls() == 1);
    CHECK(client.cache().size() == 1);
}

TEST_CASE("in-flight limit holds") {
    auto mock = std::make_shared<MockTransport>();
    mock->set_default("x");
    mock->set_delay(std::chrono::milliseconds(20));
    ModelClient client(mock_endpoint("lim", 2), mock);
    const ImageBuffer img = testing::corpus()[0];
    std::vector<std::jthread> pool;
    for (int t = 0; t < 6; ++t)
        pool.emplace_back([&, t] { client.ask_text(img, "p", "s" + std::to_string(t), "reference"); });
    pool.clear();
    CHECK(mock->calls() == 6);
    CHECK(mock->max_in_flight_seen() <= 2);
}

TEST_CASE("transient failures retry with exponential backoff") {
    auto mock = std::make_shared<MockTransport>();
    mock->set_default("ok");
    mock->fail_next(2);
    std::vector<double> sleeps;
    ModelClient client(mock_endpoint(), mock, std::make_shared<ExchangeCache>(),
                       ClientOptions{false, [&](double s) { sleeps.push_back(s); }});
    const Exchange e = client.ask(nullptr, "p", "s", "reference");
    CHECK(e.response == "ok");
    CHECK(e.attempts == 3);
    CHECK(sleeps == std::vector<double>{0.5, 1.0});

    mock->fail_next(10);
    CHECK_THROWS_AS(client.ask(nullptr, "p", "other", "reference"), InferenceError);

    mock->fail_next(1, true);
    sleeps.clear();
    try {
        client.ask(nullptr, "p", "third", "reference");
        FAIL("expected InferenceError");
    } catch (const InferenceError& err) {
        CHECK(err.auth());
    }
    CHECK(sleeps.empty());
}

TEST_CASE("offline mode refuses network transports") {
    Endpoint e = mock_endpoint();
    e.kind = EndpointKind::OpenAiChat;
    ModelClient client(e, std::make_shared<HttpTransport>(), std::make_shared<ExchangeCache>(), ClientOptions{true, {}});
    CHECK_THROWS_AS(client.ask(nullptr, "p", "s", "reference"), OfflineError);
}

TEST_CASE("exchange log persists and reloads") {
    testing::ScratchDir dir("cache");
    {
        ExchangeCache cache(dir / "log.jsonl");
        cache.append({"m", "s", "reference", "p", "d", "answer\nwith newline", "t0", 1});
        cache.append({"m", "s", "9-white_noise@low", "p", "d", "b", "t1", 2});
    }
    ExchangeCache again(dir / "log.jsonl");
    CHECK(again.size() == 2);
    const auto hit = again.find({"m", "s", "reference", sha256_hex(std::string_view("p"))});
    REQUIRE(hit);
    CHECK(hit->response == "answer\nwith newline");
    CHECK_FALSE(again.find({"m", "s", "reference", sha256_hex(std::string_view("other"))}));
    const Exchange e{"m", "s", "k", "p", "d", "r", "t", 1};
    CHECK(exchange_from_json_line(exchange_to_json_line(e)) == e);
}

TEST_CASE("prompt rendering") {
    Sample s;
    s.task = Task::MCQ;
    s.question = "What is it?";
    s.choices = {{"A", "cat"}, {"B", "dog"}};
    const std::string p = render_prompt(default_prompt_templates(), s);
    CHECK(p.find("What is it?") != std::string::npos);
    CHECK(p.find("A. cat\nB. dog") != std::string::npos);
}

TEST_CASE("seeded interleaving order") {
    CHECK(interleaved_order(6, 42) == std::vector<std::size_t>{0, 5, 4, 1, 3, 2});
    CHECK(interleaved_order(6, 42) == interleaved_order(6, 42));
    auto o = interleaved_order(50, 1);
    std::sort(o.begin(), o.end());
    for (std::size_t i = 0; i < o.size(); ++i) CHECK(o[i] == i);
}

TEST_CASE("inference run counts and idempotence") {
    Fixture f;
    auto mock = std::make_shared<MockTransport>();
    mock->set_default("A");
    auto cache = std::make_shared<ExchangeCache>(f.dir / "cache.log");
    ModelClient client(mock_endpoint(), mock, cache);
    const InferenceRun first = run_inference(client, f.samples, f.records, f.dir / "set", default_prompt_templates(), {3, 2});
    CHECK(first.exchanges.size() == 5);
    CHECK(first.failures.empty());
    CHECK(first.transport_calls == 5);
    const InferenceRun second = run_inference(client, f.samples, f.records, f.dir / "set", default_prompt_templates(), {3, 2});
    CHECK(second.transport_calls == 0);
    CHECK(second.cache_hits == 5);
    CHECK(mock->calls() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(second.exchanges[i] == first.exchanges[i]);

    // a fresh client over the persisted log resumes without calls
    auto mock2 = std::make_shared<MockTransport>();
    ModelClient resumed(mock_endpoint(), mock2, std::make_shared<ExchangeCache>(f.dir / "cache.log"));
    const InferenceRun third = run_inference(resumed, f.samples, f.records, f.dir / "set", default_prompt_templates(), {3, 1});
    CHECK(third.exchanges.size() == 5);
    CHECK(mock2->calls() == 0);
}

TEST_CASE("partial failures are reported, not hidden") {
    Fixture f;
    std::filesystem::remove(f.dir / "set" / f.records[1].image_path);
    auto mock = std::make_shared<MockTransport>();
    mock->set_default("A");
    ModelClient client(mock_endpoint(), mock);
    const InferenceRun run = run_inference(client, f.samples, f.records, f.dir / "set", default_prompt_templates(), {0, 1});
    CHECK(run.planned == 5);
    CHECK(run.exchanges.size() == 4);
    REQUIRE(run.failures.size() == 1);
    CHECK(run.failures[0].corruption_key == f.records[1].corruption_key());
}

}
