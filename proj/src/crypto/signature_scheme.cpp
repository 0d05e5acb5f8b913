// SPDX-License-Identifier: Apache-2.0
#include "bribery/crypto/signature_scheme.hpp"

#include <stdexcept>
#include <string>

#include "bribery/crypto/blst_backend.hpp"
#include "bribery/crypto/bls.hpp"
#include "bribery/crypto/mock_backend.hpp"

namespace bribery::crypto {

SchemePtr make_scheme(std::string_view backend) {
  if (backend == MockBackend::kName) return std::make_shared<Bls<MockBackend>>();
  if (backend == BlstBackend::kName || backend == "blst") return std::make_shared<Bls<BlstBackend>>();
  throw std::invalid_argument("unknown signature backend: " + std::string(backend));
}

}  // namespace bribery::crypto
