// Copyright (c) 2026 The ccbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The simulation engine: event loop, bottleneck queue, and the per-flow
//! transport that drives congestion-control schemes.

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::cc::CcEvent;
use crate::cc::CongestionControl;
use crate::cc::RttEstimate;
use crate::netsim::serialization_nanos;
use crate::netsim::LinkConfig;
use crate::units::Nanos;
use crate::Error;
use crate::Result;
use crate::MSS;

/// Cadence of the periodic timer delivered to schemes.
const TICK: Nanos = Nanos::from_millis(10);

/// Packets are declared lost once this many later packets were acked
/// (the packet-threshold analogue of three duplicate acks).
const DUPACK_THRESHOLD: u64 = 3;

/// Floor on the retransmission timeout.
const RTO_FLOOR: Nanos = Nanos::from_millis(200);

/// Retransmission timeout before any RTT sample exists.
const RTO_INITIAL: Nanos = Nanos::from_secs(1);

/// Cap on the backed-off retransmission timeout.
const RTO_MAX: Nanos = Nanos::from_secs(60);

/// A flow with data pending and no ack progress for this long is declared
/// stalled and stops transmitting.
const STALL_TIMEOUT: Nanos = Nanos::from_secs(10);

/// A data packet in the simulated network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packet {
    /// Index of the owning flow.
    pub flow_id: u32,
    /// Per-flow monotone sequence number.
    pub seq: u64,
    /// Payload size in bytes (always one MSS for data packets).
    pub size: u64,
    /// Time the sender transmitted the packet.
    pub sent_at: Nanos,
}

/// One acknowledgement as observed by the sender.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AckRecord {
    /// Arrival time of the ack at the sender.
    pub at: Nanos,
    /// Bytes acknowledged.
    pub bytes: u64,
    /// Round-trip time sampled on this packet.
    pub rtt: Nanos,
}

/// Everything a simulation records about one flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowTrace {
    /// Index of the flow in the simulation's flow list.
    pub flow_id: u32,
    /// Time the flow began transmitting.
    pub start_time: Nanos,
    /// Time the flow ceased transmitting new data.
    pub stop_time: Nanos,
    /// Per-packet acknowledgements in arrival order.
    pub ack_records: Vec<AckRecord>,
    /// Total bytes handed to the link.
    pub bytes_sent: u64,
    /// Total bytes acknowledged.
    pub bytes_acked: u64,
    /// Packets discarded by the drop-tail queue.
    pub drop_count: u64,
    /// Bytes discarded by the drop-tail queue.
    pub dropped_bytes: u64,
    /// Dupack loss episodes signaled to the scheme (each one usually costs
    /// a multiplicative decrease).
    pub loss_episodes: u64,
    /// Retransmission timeouts signaled to the scheme.
    pub timeout_count: u64,
    /// Bytes still inside the network (queued or propagating) when the
    /// simulation drained.
    pub in_flight_at_end: u64,
    /// Set if the stall detector silenced the flow (no ack progress for
    /// 10 s with data pending), at the time it did so.
    pub stalled_at: Option<Nanos>,
}

/// One flow to simulate: a congestion-control instance and its active
/// transmission window `[start, stop)`.
pub struct SimFlow {
    /// The congestion-control scheme driving this flow.
    pub cc: Box<dyn CongestionControl>,
    /// Time the flow starts transmitting.
    pub start: Nanos,
    /// Time the flow stops transmitting new data (it may equal `start`,
    /// producing an empty trace).
    pub stop: Nanos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    FlowStart,
    /// Pacing-gate wakeup for a flow blocked on its pacing rate.
    PaceWake,
    /// The packet in service finished serializing onto the link.
    ServiceDone,
    /// An ack reached the sender.
    AckArrive,
    /// Periodic per-flow timer.
    TimerTick,
    /// Retransmission-timer wakeup (fires only if it still matches the
    /// flow's armed deadline).
    RtoCheck,
}

/// A scheduled event. Ordering is total: (time, flow, seq, insertion
/// order), so simultaneous events resolve deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Event {
    at: Nanos,
    flow: u32,
    /// Packet sequence for packet events; `u64::MAX` for timers.
    seq: u64,
    /// Global insertion counter, the final tie-break.
    order: u64,
    kind: EventKind,
    /// Packet payload size (packet events only).
    size: u64,
    /// Packet transmission time (packet events only).
    sent_at: Nanos,
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.at, self.flow, self.seq, self.order).cmp(&(
            other.at,
            other.flow,
            other.seq,
            other.order,
        ))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Where a transmitted, not-yet-acknowledged packet actually is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    /// Accepted by the queue; an ack will eventually arrive.
    InNetwork,
    /// Discarded by the drop-tail queue; no ack will ever arrive.
    Dropped,
}

/// Sender-side bookkeeping for one transmitted packet that loss detection
/// has not yet written off. Declared-lost packets leave this queue: the
/// sender stops counting them, though any that were truly accepted by the
/// network are still tracked (by byte count) until their late acks arrive.
#[derive(Debug, Clone, Copy)]
struct Outstanding {
    seq: u64,
    size: u64,
    fate: Fate,
}

struct FlowState {
    cc: Box<dyn CongestionControl>,
    start: Nanos,
    stop: Nanos,

    // Current scheme decision.
    cwnd: u64,
    pacing_bps: Option<u64>,

    // Send state.
    next_seq: u64,
    /// Bytes in `outstanding` (data the sender still counts in flight).
    in_flight: u64,
    /// Transmitted packets not yet acked or declared lost, in seq order.
    outstanding: VecDeque<Outstanding>,
    /// Bytes declared lost that are nevertheless inside the network; their
    /// acks will still arrive and retire them.
    declared_pending: u64,
    pace_next: Nanos,
    /// Time of the earliest scheduled PaceWake, or MAX when none.
    pace_wake: Nanos,

    // Loss detection.
    largest_acked: Option<u64>,
    /// Sequences below this belong to an already-signaled loss episode;
    /// only losses at or beyond it raise a fresh dupack-loss event.
    episode_end: u64,
    rtt: RttEstimate,
    rto_backoff: u32,
    rto_deadline: Option<Nanos>,
    /// Time of the earliest scheduled RtoCheck, or MAX when none.
    rto_wake: Nanos,

    // Accounting.
    bytes_sent: u64,
    bytes_acked: u64,
    drop_count: u64,
    dropped_bytes: u64,
    loss_episodes: u64,
    timeout_count: u64,
    ack_records: Vec<AckRecord>,
    last_progress: Nanos,
    stalled_at: Option<Nanos>,
}

impl FlowState {
    fn active(&self, now: Nanos) -> bool {
        self.stalled_at.is_none() && now >= self.start && now < self.stop
    }

    /// Current retransmission timeout (RFC 6298 with exponential backoff).
    fn rto(&self) -> Nanos {
        let base = match self.rtt.smoothed() {
            Some(srtt) => {
                let rto = Nanos::from_secs_f64(srtt + 4.0 * self.rtt.variance());
                rto.max(RTO_FLOOR)
            }
            None => RTO_INITIAL,
        };
        (base * u64::from(self.rto_backoff)).min(RTO_MAX)
    }
}

/// The bottleneck: a drop-tail FIFO in front of the serializing link.
struct Bottleneck {
    queue: VecDeque<Packet>,
    queued_bytes: u64,
    /// Whether a packet is currently serializing onto the link. The packet
    /// itself travels inside its ServiceDone event.
    busy: bool,
}

struct Sim<'a> {
    link: &'a LinkConfig,
    flows: Vec<FlowState>,
    bottleneck: Bottleneck,
    heap: BinaryHeap<Reverse<Event>>,
    order: u64,
}

/// Runs one simulation: `flows` share the bottleneck described by `link`
/// until every flow has stopped and the network has drained.
///
/// The result is deterministic: identical inputs produce identical traces.
pub fn simulate(link: &LinkConfig, flows: Vec<SimFlow>) -> Result<Vec<FlowTrace>> {
    link.validate()?;
    if flows.is_empty() {
        return Err(Error::InvalidFlows("no flows to simulate".into()));
    }
    for (i, flow) in flows.iter().enumerate() {
        if flow.stop < flow.start {
            return Err(Error::InvalidFlows(alloc::format!(
                "flow {i} stops at {} before starting at {}",
                flow.stop,
                flow.start
            )));
        }
    }

    let mut sim = Sim {
        link,
        flows: flows
            .into_iter()
            .map(|f| FlowState {
                cc: f.cc,
                start: f.start,
                stop: f.stop,
                cwnd: 0,
                pacing_bps: None,
                next_seq: 0,
                in_flight: 0,
                outstanding: VecDeque::new(),
                declared_pending: 0,
                pace_next: Nanos::ZERO,
                pace_wake: Nanos::MAX,
                largest_acked: None,
                episode_end: 0,
                rtt: RttEstimate::default(),
                rto_backoff: 1,
                rto_deadline: None,
                rto_wake: Nanos::MAX,
                bytes_sent: 0,
                bytes_acked: 0,
                drop_count: 0,
                dropped_bytes: 0,
                loss_episodes: 0,
                timeout_count: 0,
                ack_records: Vec::new(),
                last_progress: f.start,
                stalled_at: None,
            })
            .collect(),
        bottleneck: Bottleneck {
            queue: VecDeque::new(),
            queued_bytes: 0,
            busy: false,
        },
        heap: BinaryHeap::new(),
        order: 0,
    };

    for fi in 0..sim.flows.len() {
        let (start, stop) = (sim.flows[fi].start, sim.flows[fi].stop);
        if start < stop {
            sim.push(Event {
                at: start,
                flow: fi as u32,
                seq: u64::MAX,
                order: 0,
                kind: EventKind::FlowStart,
                size: 0,
                sent_at: Nanos::ZERO,
            });
        }
    }

    sim.run();

    Ok(sim
        .flows
        .into_iter()
        .enumerate()
        .map(|(fi, f)| {
            let in_flight_at_end: u64 = f
                .outstanding
                .iter()
                .filter(|o| o.fate == Fate::InNetwork)
                .map(|o| o.size)
                .sum::<u64>()
                + f.declared_pending;
            FlowTrace {
                flow_id: fi as u32,
                start_time: f.start,
                stop_time: f.stop,
                ack_records: f.ack_records,
                bytes_sent: f.bytes_sent,
                bytes_acked: f.bytes_acked,
                drop_count: f.drop_count,
                dropped_bytes: f.dropped_bytes,
                loss_episodes: f.loss_episodes,
                timeout_count: f.timeout_count,
                in_flight_at_end,
                stalled_at: f.stalled_at,
            }
        })
        .collect())
}

impl Sim<'_> {
    fn push(&mut self, mut event: Event) {
        event.order = self.order;
        self.order += 1;
        self.heap.push(Reverse(event));
    }

    fn run(&mut self) {
        while let Some(Reverse(event)) = self.heap.pop() {
            let now = event.at;
            let fi = event.flow as usize;
            match event.kind {
                EventKind::FlowStart => {
                    self.try_send(fi, now);
                    self.push(Event {
                        at: now + TICK,
                        flow: event.flow,
                        seq: u64::MAX,
                        order: 0,
                        kind: EventKind::TimerTick,
                        size: 0,
                        sent_at: Nanos::ZERO,
                    });
                }
                EventKind::PaceWake => {
                    if self.flows[fi].pace_wake == now {
                        self.flows[fi].pace_wake = Nanos::MAX;
                    }
                    self.try_send(fi, now);
                }
                EventKind::ServiceDone => self.service_done(event, now),
                EventKind::AckArrive => self.handle_ack(event, now),
                EventKind::TimerTick => self.handle_tick(fi, now),
                EventKind::RtoCheck => self.handle_rto(fi, now),
            }
        }
    }

    fn cc_apply(&mut self, fi: usize, cc_event: &CcEvent) {
        let flow = &mut self.flows[fi];
        let decision = flow.cc.on_event(cc_event);
        flow.cwnd = decision.cwnd;
        flow.pacing_bps = decision.pacing_rate_bps;
    }

    /// Attempts to transmit new packets for flow `fi`, honoring the
    /// congestion window and the pacing gate.
    fn try_send(&mut self, fi: usize, now: Nanos) {
        if !self.flows[fi].active(now) {
            return;
        }
        self.cc_apply(fi, &CcEvent::SendOpportunity { now });

        loop {
            let flow = &self.flows[fi];
            if flow.in_flight >= flow.cwnd {
                break;
            }
            if flow.pace_next > now {
                // Blocked on pacing: make sure a wakeup exists.
                let wake_at = flow.pace_next;
                if self.flows[fi].pace_wake > wake_at {
                    self.flows[fi].pace_wake = wake_at;
                    self.push(Event {
                        at: wake_at,
                        flow: fi as u32,
                        seq: u64::MAX,
                        order: 0,
                        kind: EventKind::PaceWake,
                        size: 0,
                        sent_at: Nanos::ZERO,
                    });
                }
                break;
            }
            self.send_packet(fi, now);
        }
    }

    fn send_packet(&mut self, fi: usize, now: Nanos) {
        let seq = self.flows[fi].next_seq;
        self.flows[fi].next_seq += 1;

        let packet = Packet {
            flow_id: fi as u32,
            seq,
            size: MSS,
            sent_at: now,
        };
        let fate = self.enqueue(packet, now);

        let flow = &mut self.flows[fi];
        flow.bytes_sent += MSS;
        flow.in_flight += MSS;
        if fate == Fate::Dropped {
            flow.drop_count += 1;
            flow.dropped_bytes += MSS;
        }
        flow.outstanding.push_back(Outstanding {
            seq,
            size: MSS,
            fate,
        });
        if let Some(rate) = flow.pacing_bps {
            let gap = serialization_nanos(MSS, rate.max(1));
            flow.pace_next = flow.pace_next.max(now) + gap;
        }
        if flow.rto_deadline.is_none() {
            let deadline = now + flow.rto();
            self.arm_rto(fi, deadline);
        }
    }

    /// Offers a packet to the drop-tail queue, returning where it ended up.
    fn enqueue(&mut self, packet: Packet, now: Nanos) -> Fate {
        if !self.bottleneck.busy && self.bottleneck.queue.is_empty() {
            self.start_service(packet, now);
            Fate::InNetwork
        } else if self.bottleneck.queued_bytes + packet.size <= self.link.queue_capacity {
            self.bottleneck.queued_bytes += packet.size;
            self.bottleneck.queue.push_back(packet);
            Fate::InNetwork
        } else {
            Fate::Dropped
        }
    }

    /// Begins serializing `packet` onto the link. The service time is
    /// fixed now, from the current trace rate; mid-service rate changes
    /// affect only later packets.
    fn start_service(&mut self, packet: Packet, now: Nanos) {
        self.bottleneck.busy = true;
        let rate = self.link.trace.rate_at(now);
        self.push(Event {
            at: now + serialization_nanos(packet.size, rate),
            flow: packet.flow_id,
            seq: packet.seq,
            order: 0,
            kind: EventKind::ServiceDone,
            size: packet.size,
            sent_at: packet.sent_at,
        });
    }

    fn service_done(&mut self, event: Event, now: Nanos) {
        self.bottleneck.busy = false;

        // The departed packet propagates and is acked; the full two-way
        // propagation delay separates departure from the sender hearing
        // back (forward and reverse halves are individually unobservable).
        self.push(Event {
            at: now + self.link.min_rtt,
            flow: event.flow,
            seq: event.seq,
            order: 0,
            kind: EventKind::AckArrive,
            size: event.size,
            sent_at: event.sent_at,
        });

        // Work conservation: immediately pull the next queued packet.
        if let Some(next) = self.bottleneck.queue.pop_front() {
            self.bottleneck.queued_bytes -= next.size;
            self.start_service(next, now);
        }
    }

    fn handle_ack(&mut self, event: Event, now: Nanos) {
        let fi = event.flow as usize;
        let rtt = now - event.sent_at;
        {
            let flow = &mut self.flows[fi];

            // Retire the packet. An ack with no outstanding entry belongs
            // to a packet already declared lost (and therefore tracked only
            // as declared-pending bytes).
            if let Some(pos) = flow.outstanding.iter().position(|o| o.seq == event.seq) {
                let entry = flow.outstanding.remove(pos).unwrap();
                flow.in_flight -= entry.size;
            } else {
                debug_assert!(flow.declared_pending >= event.size);
                flow.declared_pending -= event.size;
            }
            flow.bytes_acked += event.size;
            flow.ack_records.push(AckRecord {
                at: now,
                bytes: event.size,
                rtt,
            });
            flow.last_progress = now;
            flow.rtt.update(rtt.as_secs_f64());
            flow.rto_backoff = 1;
            flow.largest_acked = Some(match flow.largest_acked {
                Some(prev) => prev.max(event.seq),
                None => event.seq,
            });
        }

        self.cc_apply(
            fi,
            &CcEvent::Ack {
                now,
                bytes_acked: event.size,
                rtt_sample: rtt,
            },
        );

        self.detect_dupack_losses(fi, now);

        // Restart the retransmission timer while data remains outstanding.
        let flow = &mut self.flows[fi];
        flow.rto_deadline = None;
        if !flow.outstanding.is_empty() {
            let deadline = now + flow.rto();
            self.arm_rto(fi, deadline);
        }

        self.try_send(fi, now);
    }

    /// Declares losses by packet threshold: a packet is lost once
    /// `DUPACK_THRESHOLD` higher sequences have been acked. At most one
    /// dupack-loss event reaches the scheme per loss episode (all losses
    /// below the highest sequence sent when the episode opened).
    fn detect_dupack_losses(&mut self, fi: usize, now: Nanos) {
        let flow = &mut self.flows[fi];
        let Some(largest) = flow.largest_acked else {
            return;
        };
        let Some(threshold) = largest.checked_sub(DUPACK_THRESHOLD) else {
            return;
        };

        let mut new_episode = false;
        while let Some(entry) = flow.outstanding.front().copied() {
            if entry.seq > threshold {
                break;
            }
            flow.outstanding.pop_front();
            flow.in_flight -= entry.size;
            if entry.fate == Fate::InNetwork {
                // The network still carries it; its ack will arrive late.
                flow.declared_pending += entry.size;
            }
            if entry.seq >= flow.episode_end {
                new_episode = true;
            }
        }

        if new_episode {
            flow.episode_end = flow.next_seq;
            flow.loss_episodes += 1;
            self.cc_apply(fi, &CcEvent::DupackLoss { now });
        }
    }

    fn handle_tick(&mut self, fi: usize, now: Nanos) {
        let flow = &self.flows[fi];
        if flow.stalled_at.is_some() {
            return;
        }

        // Stall detection: data pending, no ack progress for too long.
        if !flow.outstanding.is_empty()
            && now.saturating_sub(flow.last_progress) >= STALL_TIMEOUT
        {
            let flow = &mut self.flows[fi];
            flow.stalled_at = Some(now);
            flow.rto_deadline = None;
            return;
        }

        self.cc_apply(fi, &CcEvent::TimerTick { now });
        self.try_send(fi, now);

        let next = now + TICK;
        if next < self.flows[fi].stop {
            self.push(Event {
                at: next,
                flow: fi as u32,
                seq: u64::MAX,
                order: 0,
                kind: EventKind::TimerTick,
                size: 0,
                sent_at: Nanos::ZERO,
            });
        }
    }

    /// Ensures an RtoCheck wakeup exists at or before `deadline`, and
    /// records the deadline.
    fn arm_rto(&mut self, fi: usize, deadline: Nanos) {
        let flow = &mut self.flows[fi];
        flow.rto_deadline = Some(deadline);
        if flow.rto_wake > deadline {
            flow.rto_wake = deadline;
            self.push(Event {
                at: deadline,
                flow: fi as u32,
                seq: u64::MAX,
                order: 0,
                kind: EventKind::RtoCheck,
                size: 0,
                sent_at: Nanos::ZERO,
            });
        }
    }

    fn handle_rto(&mut self, fi: usize, now: Nanos) {
        if self.flows[fi].rto_wake == now {
            self.flows[fi].rto_wake = Nanos::MAX;
        }
        let Some(deadline) = self.flows[fi].rto_deadline else {
            return;
        };
        if deadline > now {
            // The deadline moved; keep a wakeup scheduled for it.
            if self.flows[fi].rto_wake > deadline {
                self.flows[fi].rto_wake = deadline;
                self.push(Event {
                    at: deadline,
                    flow: fi as u32,
                    seq: u64::MAX,
                    order: 0,
                    kind: EventKind::RtoCheck,
                    size: 0,
                    sent_at: Nanos::ZERO,
                });
            }
            return;
        }
        if self.flows[fi].stalled_at.is_some() {
            return;
        }

        // Timeout: every outstanding packet is presumed lost.
        let flow = &mut self.flows[fi];
        flow.rto_deadline = None;
        if flow.outstanding.is_empty() {
            return;
        }
        for entry in flow.outstanding.drain(..) {
            flow.in_flight -= entry.size;
            if entry.fate == Fate::InNetwork {
                flow.declared_pending += entry.size;
            }
        }
        flow.episode_end = flow.next_seq;
        flow.rto_backoff = (flow.rto_backoff * 2).min(64);
        flow.timeout_count += 1;
        self.cc_apply(fi, &CcEvent::TimeoutLoss { now });
        self.try_send(fi, now);
    }
}
