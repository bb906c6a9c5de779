#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smartband/detector.hpp"
#include "smartband/geoloc.hpp"

namespace smartband::alerting {

/// Epoch for rendering stream-relative seconds as wall-clock UTC:
/// 2020-01-01T00:00:00Z.
inline constexpr std::int64_t kDefaultEpochUnix = 1577836800;

/// True when every byte is in the GSM 03.38 basic set as covered by
/// printable ASCII plus LF/CR (the subset this system emits).
bool is_gsm_safe(std::string_view text);

/// + followed by 8..15 digits, first digit nonzero.
bool is_e164(std::string_view number);

/// A fully rendered outbound alert.
struct AlertMessage {
    std::string device_id;
    double t = 0.0;          // stream-relative trigger time
    std::string time_text;   // "YYYY-MM-DD HH:MM:SS UTC"
    std::optional<double> lat;
    std::optional<double> lon;
    std::string map_url;     // non-empty exactly when lat/lon are present
    std::string reason;
    std::string body;        // final SMS text
};

/// Renders the SMS body:
///   EMERGENCY <device_id> abnormal heart activity at <time>. Loc: <loc>
/// where <loc> is https://maps.google.com/?q=<lat>,<lon> (%.6f each) when
/// a fix is available and "unavailable" otherwise. The template plus a
/// device id of at most 20 bytes always fits one 160-char SMS.
/// Throws DeviceIdTooLong (> 20 bytes) and DeviceIdNotGsmSafe.
AlertMessage compose_sms(const detector::AlertTrigger& trigger,
                         const std::optional<geoloc::GeoFix>& fix,
                         std::string_view device_id,
                         std::int64_t epoch_unix = kDefaultEpochUnix);

/// Raw byte stream sent to the modem for one message, in text mode:
///   AT+CMGF=1\r  AT+CMGS="<recipient>"\r  <body>\x1A
/// Throws InvalidRecipient.
std::string emit_at_commands(const AlertMessage& message,
                             std::string_view recipient);

/// Parsed view of such a byte stream, for loopback verification.
struct DecodedSubmission {
    bool text_mode = false;
    std::string recipient;
    std::string body;
};

/// Strict inverse of emit_at_commands; throws ConfigError on framing that
/// the emitter could not have produced.
DecodedSubmission decode_at_commands(std::string_view bytes);

/// One request/response turn with a modem. `request` is the exact byte
/// run the emitter produces for that stage (command + CR, or body +
/// Ctrl-Z); the return value is the modem's final response line.
class ModemChannel {
public:
    virtual ~ModemChannel() = default;
    virtual std::string exchange(std::string_view request) = 0;
};

/// Test double: answers OK / "> " like a healthy modem, except for send
/// stages (CMGS prompt or body submission) whose zero-based global send
/// index is listed in fail_sends, which get ERROR instead. Records the
/// whole conversation.
class ScriptedModem final : public ModemChannel {
public:
    ScriptedModem() = default;
    explicit ScriptedModem(std::vector<std::size_t> fail_sends);

    std::string exchange(std::string_view request) override;

    struct Turn {
        std::string request;
        std::string response;
    };
    const std::vector<Turn>& turns() const { return turns_; }

private:
    std::vector<std::size_t> fail_sends_;
    std::vector<Turn> turns_;
    std::size_t sends_seen_ = 0;
};

enum class DeliveryOutcome : std::uint8_t { Delivered, Failed };

struct DeliveryRecord {
    std::string recipient;
    std::size_t attempts = 0;  // 1 + retries actually used
    DeliveryOutcome outcome = DeliveryOutcome::Failed;
    std::string transcript;  // every byte sent during those attempts
};

/// Sends one message to each contact in order. An attempt walks the three
/// stages (text mode, submit header, body); a non-matching response fails
/// the attempt and the whole attempt is restarted, up to max_retries
/// extra tries per contact. Delivery to one contact never blocks the
/// rest. Throws NoContacts and InvalidRecipient (before any send).
std::vector<DeliveryRecord> dispatch(const AlertMessage& message,
                                     std::span<const std::string> contacts,
                                     ModemChannel& channel,
                                     std::size_t max_retries);

}  // namespace smartband::alerting
