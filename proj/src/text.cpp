#include "regsolve/text.hpp"

#include <stdexcept>

namespace regsolve {

std::string to_utf8(TextView text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (c < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else if (c < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (c >> 12)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (c >> 18)));
            out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

Text from_utf8(std::string_view bytes) {
    Text out;
    out.reserve(bytes.size());
    size_t i = 0;
    auto cont = [&](size_t k) -> char32_t {
        unsigned char b = static_cast<unsigned char>(bytes[k]);
        if ((b & 0xC0) != 0x80) throw std::runtime_error("invalid UTF-8 continuation byte");
        return b & 0x3F;
    };
    while (i < bytes.size()) {
        unsigned char b0 = static_cast<unsigned char>(bytes[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            i += 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            if (i + 1 >= bytes.size()) throw std::runtime_error("truncated UTF-8 sequence");
            out.push_back(((b0 & 0x1F) << 6) | cont(i + 1));
            i += 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            if (i + 2 >= bytes.size()) throw std::runtime_error("truncated UTF-8 sequence");
            out.push_back(((b0 & 0x0F) << 12) | (cont(i + 1) << 6) | cont(i + 2));
            i += 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            if (i + 3 >= bytes.size()) throw std::runtime_error("truncated UTF-8 sequence");
            out.push_back(((b0 & 0x07) << 18) | (cont(i + 1) << 12) | (cont(i + 2) << 6) |
                          cont(i + 3));
            i += 4;
        } else {
            throw std::runtime_error("invalid UTF-8 lead byte");
        }
    }
    return out;
}

}  // namespace regsolve
