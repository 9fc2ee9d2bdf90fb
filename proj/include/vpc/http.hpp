#pragma once

// JSON-over-HTTP transport for derivation sessions.

#include "vpc/service.hpp"

namespace httplib {
class Server;
}

namespace vpc {

void install_routes(httplib::Server& server, Service& service);

/// Blocks serving on host:port until the server is stopped.
void serve(Service& service, const std::string& host, int port);

}  // namespace vpc
