#pragma once

#include <memory>
#include <string>
#include <thread>

#include "litnav/config.hpp"
#include "litnav/corpus.hpp"
#include "litnav/evalbench.hpp"

namespace litnav {

// HTTP front door over one read-only corpus snapshot:
//   POST /search            {"query", "k"?, "max_rounds"?, "workers"?}
//   GET  /session/<id>      audit trail of a finished search
//   POST /evaluate          {"suite":[...], "results":[...], "k"?, "strict_k"?}
//   GET  /paper/<id>/<tier> reading tools, tier in {meta, abstract, chunks}
// Independent searches run concurrently; each request builds a fresh
// backend set from the configuration. While the service runs a ".serving"
// marker in the corpus directory keeps ingest away.
class Service {
public:
    Service(const Corpus& corpus, EngineConfig config, Taxonomy taxonomy = Taxonomy::empty());
    ~Service();

    // Binds and serves on a background thread; port 0 picks a free port.
    // Returns the bound port.
    int start(const std::string& host, int port);
    void stop();
    bool running() const;

    // Serves on the calling thread until stop() (CLI entry point).
    int run(const std::string& host, int port);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace litnav
