"""Snapshot providers: git repositories and directory-of-snapshots trees.

Git access goes through the `git` executable using object reads only
(rev-parse, log, ls-tree, cat-file --batch); the working tree is never
touched. The directory provider implements the same contract from plain
folders, so the pipeline can be exercised without git.
"""

from __future__ import annotations

import json
import re
import subprocess
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Union

RangeSpec = Union[None, int, str]  # None=all, int=last N, "A..B"=id range


class RepoNotFound(Exception):
    pass


class RangeEmpty(Exception):
    pass


class VcsToolError(Exception):
    pass


@dataclass(frozen=True)
class CommitMeta:
    id: str
    timestamp: str  # ISO-8601 UTC
    message: str
    ordinal: int  # position in the full first-parent walk, oldest = 0


def _iso_utc(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )


def apply_range(commits: list[CommitMeta], range_spec: RangeSpec) -> list[CommitMeta]:
    """Bound an oldest-first commit list by count or by `A..B` (A exclusive)."""
    selected = commits
    if isinstance(range_spec, int):
        if range_spec <= 0:
            raise RangeEmpty(f"range count must be positive, got {range_spec}")
        selected = commits[-range_spec:]
    elif isinstance(range_spec, str) and range_spec:
        if ".." not in range_spec:
            raise RangeEmpty(f"range must look like A..B, got {range_spec!r}")
        start_id, _, end_id = range_spec.partition("..")
        lo = 0
        hi = len(commits)
        if start_id:
            lo = _find_commit(commits, start_id) + 1
        if end_id:
            hi = _find_commit(commits, end_id) + 1
        selected = commits[lo:hi]
    if not selected:
        raise RangeEmpty("no commits in the requested range")
    return selected


def _find_commit(commits: list[CommitMeta], commit_id: str) -> int:
    for i, c in enumerate(commits):
        if c.id == commit_id or c.id.startswith(commit_id):
            return i
    raise RangeEmpty(f"commit {commit_id!r} not found in first-parent history")


class GitProvider:
    def __init__(self, repo_path: Union[str, Path]):
        self.repo_path = Path(repo_path)
        if not self.repo_path.is_dir():
            raise RepoNotFound(f"{repo_path}: no such directory")
        try:
            self._git("rev-parse", "--git-dir")
        except VcsToolError as exc:
            raise RepoNotFound(f"{repo_path}: not a git repository ({exc})") from exc

    def _git(self, *args: str, data: Optional[bytes] = None) -> bytes:
        try:
            proc = subprocess.run(
                ["git", "-C", str(self.repo_path), *args],
                input=data,
                capture_output=True,
            )
        except FileNotFoundError as exc:
            raise VcsToolError("git executable not found on PATH") from exc
        if proc.returncode != 0:
            stderr = proc.stderr.decode("utf-8", "replace").strip()
            raise VcsToolError(f"git {args[0]} failed: {stderr}")
        return proc.stdout

    def list_commits(self, range_spec: RangeSpec = None) -> list[CommitMeta]:
        out = self._git(
            "log", "--first-parent", "--reverse", "--format=%H%x1f%ct%x1f%B%x1e"
        )
        commits: list[CommitMeta] = []
        for i, record in enumerate(out.decode("utf-8", "replace").split("\x1e")):
            record = record.strip("\n")
            if not record.strip():
                continue
            commit_id, epoch, message = record.split("\x1f", 2)
            commits.append(
                CommitMeta(commit_id.strip(), _iso_utc(int(epoch)),
                           message.rstrip("\n"), len(commits))
            )
        if not commits:
            raise RangeEmpty("repository has no commits")
        return apply_range(commits, range_spec)

    def read_files(
        self, commit_id: str, path_filter: Callable[[str], bool]
    ) -> list[tuple[str, bytes]]:
        listing = self._git("ls-tree", "-r", "-z", "--name-only", commit_id)
        paths = [p.decode("utf-8", "replace") for p in listing.split(b"\0") if p]
        wanted = [p for p in paths if path_filter(p)]
        if not wanted:
            return []
        request = "".join(f"{commit_id}:{p}\n" for p in wanted).encode("utf-8")
        out = self._git("cat-file", "--batch", data=request)
        return list(zip(wanted, _parse_cat_file_batch(out, wanted)))


def _parse_cat_file_batch(out: bytes, wanted: list[str]) -> list[bytes]:
    blobs: list[bytes] = []
    pos = 0
    for path in wanted:
        nl = out.index(b"\n", pos)
        header = out[pos:nl].decode("utf-8", "replace")
        pos = nl + 1
        if header.endswith(" missing"):
            raise VcsToolError(f"object missing for {path}")
        size = int(header.rsplit(" ", 1)[1])
        blobs.append(out[pos:pos + size])
        pos += size + 1  # trailing newline after each object
    return blobs


_SNAPSHOT_DIR_RE = re.compile(r"^(\d+)_(.+)$")


class SnapshotDirProvider:
    """Reads `NNNN_<id>/` snapshot folders described by commits.jsonl."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        if not self.root.is_dir():
            raise RepoNotFound(f"{root}: no such directory")
        manifest = self.root / "commits.jsonl"
        if not manifest.is_file():
            raise RepoNotFound(f"{root}: missing commits.jsonl")
        self._meta: dict[str, dict] = {}
        for line in manifest.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            self._meta[record["id"]] = record
        self._dirs: dict[str, Path] = {}
        ordered: list[tuple[int, str]] = []
        for child in sorted(self.root.iterdir()):
            m = _SNAPSHOT_DIR_RE.match(child.name)
            if child.is_dir() and m:
                ordered.append((int(m.group(1)), m.group(2)))
                self._dirs[m.group(2)] = child
        self._order = [cid for _, cid in sorted(ordered)]

    def list_commits(self, range_spec: RangeSpec = None) -> list[CommitMeta]:
        commits: list[CommitMeta] = []
        for ordinal, commit_id in enumerate(self._order):
            meta = self._meta.get(commit_id)
            if meta is None:
                raise VcsToolError(f"commits.jsonl has no entry for {commit_id}")
            ts = meta["timestamp"]
            timestamp = _iso_utc(ts) if isinstance(ts, int) else str(ts)
            commits.append(
                CommitMeta(commit_id, timestamp, str(meta["message"]), ordinal)
            )
        if not commits:
            raise RangeEmpty("snapshot directory has no snapshots")
        return apply_range(commits, range_spec)

    def read_files(
        self, commit_id: str, path_filter: Callable[[str], bool]
    ) -> list[tuple[str, bytes]]:
        base = self._dirs.get(commit_id)
        if base is None:
            raise VcsToolError(f"no snapshot directory for {commit_id}")
        files: list[tuple[str, bytes]] = []
        for child in sorted(base.rglob("*")):
            if not child.is_file():
                continue
            rel = child.relative_to(base).as_posix()
            if path_filter(rel):
                files.append((rel, child.read_bytes()))
        return files
