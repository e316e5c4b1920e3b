"""Run-time support: the live link between support-objects and their extension-objects.

Each support-object owns an :class:`ExtensionRegistry`, a doubly-linked list of
entries in attach order plus a slot table for classers (at most one live
instance per classer type). Attach and detach touch a constant number of
list nodes; dispatch touches each current entry once. ``Runtime.visits``
counts node touches so those costs can be measured.
"""

from __future__ import annotations

from typing import Callable, Iterator, Optional

from .diagnostics import R_CLASSER_ABSENT, R_CLASSER_OCCUPIED, R_EVAL, R_LIVE_EXTENSIONS, R_PHASE_THROW

FATAL_PHASES = ("Pre_", "Post_")


class EcoRuntimeError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message
        super().__init__(f"runtime error[{code}]: {message}")


class EcoThrow(Exception):
    """A value raised by a program's ``throw`` statement."""

    def __init__(self, value):
        self.value = value
        super().__init__(value)


class RuntimeObject:
    """Minimal object protocol the registry operates on."""

    __slots__ = ("registry", "entry", "alive")

    def __init__(self):
        self.registry: Optional[ExtensionRegistry] = None
        self.entry: Optional[Entry] = None
        self.alive = True


class Entry:
    __slots__ = ("ext", "type_name", "is_classer", "seq", "prev", "next", "registry", "live")

    def __init__(self, ext, type_name: str, is_classer: bool, seq: int, registry: "ExtensionRegistry"):
        self.ext = ext
        self.type_name = type_name
        self.is_classer = is_classer
        self.seq = seq
        self.prev: Optional[Entry] = None
        self.next: Optional[Entry] = None
        self.registry = registry
        self.live = True


class ExtensionRegistry:
    __slots__ = ("owner", "head", "tail", "size", "classer_slots", "next_seq")

    def __init__(self, owner):
        self.owner = owner
        self.head: Optional[Entry] = None
        self.tail: Optional[Entry] = None
        self.size = 0
        self.classer_slots: dict[str, Entry] = {}
        self.next_seq = 0

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Entry]:
        node = self.head
        while node is not None:
            yield node
            node = node.next

    def extensions(self) -> list:
        return [e.ext for e in self]


def _registry(obj) -> ExtensionRegistry:
    reg = obj.registry
    if reg is None:
        reg = obj.registry = ExtensionRegistry(obj)
    return reg


class Runtime:
    def __init__(self):
        self.visits = 0

    def attach(self, support, ext, type_name: str, is_classer: bool) -> None:
        if not support.alive:
            raise EcoRuntimeError(R_EVAL, "attach to a destroyed support-object")
        if ext is support:
            raise EcoRuntimeError(R_EVAL, "an object cannot extend itself")
        if ext.entry is not None:
            raise EcoRuntimeError(R_EVAL, f"'{type_name}' extension-object is already attached")
        if ext.registry is not None and ext.registry.size:
            # ext has no descendants, so it cannot be an ancestor of support: the relation stays a forest.
            raise EcoRuntimeError(R_EVAL, f"'{type_name}' extension-object already supports extensions")
        reg = _registry(support)
        if is_classer and type_name in reg.classer_slots:
            raise EcoRuntimeError(R_CLASSER_OCCUPIED, f"classer '{type_name}' is already instantiated on this support-object")
        entry = Entry(ext, type_name, is_classer, reg.next_seq, reg)
        reg.next_seq += 1
        self.visits += 1
        tail = reg.tail
        if tail is None:
            reg.head = entry
        else:
            self.visits += 1
            tail.next = entry
            entry.prev = tail
        reg.tail = entry
        reg.size += 1
        if is_classer:
            reg.classer_slots[type_name] = entry
        ext.entry = entry

    def detach(self, ext) -> None:
        entry = ext.entry
        if entry is None:
            raise EcoRuntimeError(R_EVAL, "object is not an attached extension-object")
        if ext.registry is not None and ext.registry.size:
            raise EcoRuntimeError(
                R_LIVE_EXTENSIONS, f"'{entry.type_name}' still supports {ext.registry.size} live extension-object(s)"
            )
        reg = entry.registry
        self.visits += 1
        prev, nxt = entry.prev, entry.next
        if prev is None:
            reg.head = nxt
        else:
            self.visits += 1
            prev.next = nxt
        if nxt is None:
            reg.tail = prev
        else:
            self.visits += 1
            nxt.prev = prev
        # entry.next is kept so that a dispatch currently standing on this entry can move on.
        entry.live = False
        reg.size -= 1
        if entry.is_classer and reg.classer_slots.get(entry.type_name) is entry:
            del reg.classer_slots[entry.type_name]
        ext.entry = None

    def dispatch(self, support, emethod: str, args: list, invoke: Callable) -> int:
        """Run ``invoke(ext, emethod, args)`` for each current extension-object in attach order.

        ``invoke`` returns True when the extension's class defines a behavior.
        Entries attached while the dispatch runs are not visited; entries
        detached before being reached are skipped. The first exception stops
        the iteration; for Pre_/Post_ E-methods a thrown value becomes R105.
        """
        reg = support.registry
        if reg is None or reg.head is None:
            return 0
        limit = reg.tail.seq
        node = reg.head
        executed = 0
        while node is not None and node.seq <= limit:
            self.visits += 1
            if node.live:
                try:
                    if invoke(node.ext, emethod, args):
                        executed += 1
                except EcoThrow as exc:
                    if emethod.startswith(FATAL_PHASES):
                        raise EcoRuntimeError(
                            R_PHASE_THROW,
                            f"behavior of {emethod} in '{node.type_name}' threw during the update phase",
                        ) from exc
                    raise
            node = node.next
        return executed

    def classer_present(self, support, type_name: str) -> bool:
        reg = support.registry
        return reg is not None and type_name in reg.classer_slots

    def classer_get(self, support, type_name: str):
        reg = support.registry
        entry = reg.classer_slots.get(type_name) if reg is not None else None
        if entry is None:
            raise EcoRuntimeError(R_CLASSER_ABSENT, f"classer '{type_name}' is not instantiated on this support-object")
        return entry.ext

    def destroy(self, obj) -> None:
        if not obj.alive:
            raise EcoRuntimeError(R_EVAL, "object already destroyed")
        if obj.registry is not None and obj.registry.size:
            raise EcoRuntimeError(
                R_LIVE_EXTENSIONS,
                f"cannot destroy a support-object with {obj.registry.size} live extension-object(s)",
            )
        if obj.entry is not None:
            self.detach(obj)
        obj.alive = False


def support_of(obj):
    """The support-object ``obj`` is attached to, or None."""
    entry = obj.entry
    return entry.registry.owner if entry is not None else None


def is_forest(objects) -> bool:
    """Check that following support links from any object never revisits an object."""
    for obj in objects:
        seen = {id(obj)}
        cur = support_of(obj)
        while cur is not None:
            if id(cur) in seen:
                return False
            seen.add(id(cur))
            cur = support_of(cur)
    return True
