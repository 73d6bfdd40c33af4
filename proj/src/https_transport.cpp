#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "engage/errors.hpp"
#include "engage/transport.hpp"

namespace engage {

HttpsTransport::HttpsTransport(std::string host, int timeout_seconds)
    : host_(std::move(host)), timeout_seconds_(timeout_seconds) {}

HttpResponse HttpsTransport::get(const ApiRequest& request) {
  httplib::SSLClient client(host_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  client.enable_server_certificate_verification(true);

  httplib::Params params;
  for (const auto& [key, value] : request.params) params.emplace(key, value);
  auto result = client.Get(request.path, params, httplib::Headers{});
  if (!result) {
    throw TransportError(0, "request to " + host_ + request.path + " failed: " +
                                httplib::to_string(result.error()));
  }
  return {result->status, result->body};
}

}  // namespace engage
