#include "smartband/alerting.hpp"

#include <algorithm>
#include <cstdio>

#include "smartband/errors.hpp"
#include "smartband/timefmt.hpp"

namespace smartband::alerting {

namespace {

constexpr std::size_t kMaxDeviceId = 20;
constexpr std::size_t kMaxBody = 160;
constexpr char kCtrlZ = '\x1a';

constexpr std::string_view kOk = "OK";
constexpr std::string_view kPrompt = "> ";
constexpr std::string_view kError = "ERROR";

std::string cmgs_command(std::string_view recipient) {
    std::string out = "AT+CMGS=\"";
    out += recipient;
    out += "\"\r";
    return out;
}

}  // namespace

bool is_gsm_safe(std::string_view text) {
    for (char c : text) {
        auto b = static_cast<unsigned char>(c);
        bool printable_ascii = b >= 0x20 && b <= 0x7e;
        if (!printable_ascii && c != '\n' && c != '\r') return false;
    }
    return true;
}

bool is_e164(std::string_view number) {
    if (number.size() < 9 || number.size() > 16) return false;  // + and 8..15
    if (number[0] != '+') return false;
    if (number[1] < '1' || number[1] > '9') return false;
    for (std::size_t i = 1; i < number.size(); ++i) {
        if (number[i] < '0' || number[i] > '9') return false;
    }
    return true;
}

AlertMessage compose_sms(const detector::AlertTrigger& trigger,
                         const std::optional<geoloc::GeoFix>& fix,
                         std::string_view device_id,
                         std::int64_t epoch_unix) {
    if (device_id.size() > kMaxDeviceId) {
        throw DeviceIdTooLong("device id '" + std::string(device_id) +
                              "' exceeds " + std::to_string(kMaxDeviceId) +
                              " characters");
    }
    if (!is_gsm_safe(device_id)) {
        throw DeviceIdNotGsmSafe("device id contains non-GSM characters");
    }

    AlertMessage message;
    message.device_id = std::string(device_id);
    message.t = trigger.t;
    message.time_text = format_utc(epoch_unix, trigger.t);
    message.reason = std::string(detector::reason_name(trigger.reason));

    std::string loc = "unavailable";
    if (fix) {
        char buf[80];
        std::snprintf(buf, sizeof buf,
                      "https://maps.google.com/?q=%.6f,%.6f", fix->lat,
                      fix->lon);
        message.lat = fix->lat;
        message.lon = fix->lon;
        message.map_url = buf;
        loc = buf;
    }

    message.body = "EMERGENCY " + message.device_id +
                   " abnormal heart activity at " + message.time_text +
                   ". Loc: " + loc;
    // The template plus a 20-char id and full-width coordinates tops out
    // well under the single-SMS limit; guard it anyway.
    if (message.body.size() > kMaxBody) {
        throw DeviceIdTooLong("composed SMS exceeds 160 characters");
    }
    return message;
}

std::string emit_at_commands(const AlertMessage& message,
                             std::string_view recipient) {
    if (!is_e164(recipient)) {
        throw InvalidRecipient("recipient '" + std::string(recipient) +
                               "' is not E.164 (+ then 8-15 digits)");
    }
    std::string out = "AT+CMGF=1\r";
    out += cmgs_command(recipient);
    out += message.body;
    out += kCtrlZ;
    return out;
}

DecodedSubmission decode_at_commands(std::string_view bytes) {
    DecodedSubmission decoded;

    constexpr std::string_view kTextMode = "AT+CMGF=1\r";
    if (bytes.substr(0, kTextMode.size()) != kTextMode) {
        throw ConfigError("frame does not start with text-mode select");
    }
    bytes.remove_prefix(kTextMode.size());
    decoded.text_mode = true;

    constexpr std::string_view kSubmit = "AT+CMGS=\"";
    if (bytes.substr(0, kSubmit.size()) != kSubmit) {
        throw ConfigError("frame missing CMGS header");
    }
    bytes.remove_prefix(kSubmit.size());
    std::size_t quote = bytes.find('"');
    if (quote == std::string_view::npos || bytes.size() < quote + 2 ||
        bytes[quote + 1] != '\r') {
        throw ConfigError("CMGS header is not quote-and-CR terminated");
    }
    decoded.recipient = std::string(bytes.substr(0, quote));
    if (!is_e164(decoded.recipient)) {
        throw ConfigError("CMGS recipient is not E.164");
    }
    bytes.remove_prefix(quote + 2);

    if (bytes.empty() || bytes.back() != kCtrlZ) {
        throw ConfigError("frame does not end with Ctrl-Z");
    }
    decoded.body = std::string(bytes.substr(0, bytes.size() - 1));
    return decoded;
}

ScriptedModem::ScriptedModem(std::vector<std::size_t> fail_sends)
    : fail_sends_(std::move(fail_sends)) {}

std::string ScriptedModem::exchange(std::string_view request) {
    std::string response;
    if (request == "AT+CMGF=1\r") {
        response = kOk;
    } else if (request.starts_with("AT+CMGS=\"") &&
               request.ends_with("\"\r")) {
        std::size_t index = sends_seen_++;
        bool fail = std::find(fail_sends_.begin(), fail_sends_.end(),
                              index) != fail_sends_.end();
        response = fail ? std::string(kError) : std::string(kPrompt);
    } else if (!request.empty() && request.back() == kCtrlZ) {
        response = kOk;
    } else {
        response = kError;
    }
    turns_.push_back({std::string(request), response});
    return response;
}

std::vector<DeliveryRecord> dispatch(const AlertMessage& message,
                                     std::span<const std::string> contacts,
                                     ModemChannel& channel,
                                     std::size_t max_retries) {
    if (contacts.empty()) {
        throw NoContacts("dispatch needs at least one contact");
    }
    for (const std::string& contact : contacts) {
        if (!is_e164(contact)) {
            throw InvalidRecipient("contact '" + contact +
                                   "' is not E.164 (+ then 8-15 digits)");
        }
    }

    std::vector<DeliveryRecord> records;
    records.reserve(contacts.size());
    for (const std::string& contact : contacts) {
        DeliveryRecord record;
        record.recipient = contact;

        for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
            ++record.attempts;
            bool ok = true;

            auto stage = [&](std::string request,
                             std::string_view expect) {
                record.transcript += request;
                std::string response = channel.exchange(request);
                record.transcript += response;
                return response == expect;
            };

            // Body bytes go out only after a healthy prompt, so a
            // delivered transcript carries exactly one Ctrl-Z.
            ok = stage("AT+CMGF=1\r", kOk) &&
                 stage(cmgs_command(contact), kPrompt) &&
                 stage(message.body + kCtrlZ, kOk);

            if (ok) {
                record.outcome = DeliveryOutcome::Delivered;
                break;
            }
        }
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace smartband::alerting
