"""Operator CLI: run the server, seed members and documents, move archives.

Every command prints a single machine-parseable value on stdout when it
succeeds, writes diagnostics to stderr, and exits 0/1. The data directory
comes from ``--data-dir`` or the ``DEME_DATA_DIR`` environment variable.

The one-shot commands open the data directory directly and assume the server
is not running against it at the same time (the log has a single writer).
"""

from __future__ import annotations

import socket
import sys
from pathlib import Path

import click
import uvicorn

from .api import create_app
from .errors import DemeError
from .service import DemeService


def _open_service(data_dir: Path) -> DemeService:
    try:
        return DemeService(data_dir)
    except DemeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


data_dir_option = click.option(
    "--data-dir",
    envvar="DEME_DATA_DIR",
    required=True,
    type=click.Path(path_type=Path),
    help="Deployment data directory (env: DEME_DATA_DIR).",
)


@click.group()
def main() -> None:
    """Deme deliberation server operator tool."""


@main.command()
@click.option("--addr", default="127.0.0.1:8000", show_default=True, help="host:port to listen on (port 0 picks a free port).")
@data_dir_option
@click.option(
    "--ui-dir",
    type=click.Path(path_type=Path),
    default=None,
    help="Optional directory of built web client assets to serve at /.",
)
def serve(addr: str, data_dir: Path, ui_dir: Path | None) -> None:
    """Run the HTTP service until interrupted."""
    host, sep, port_text = addr.rpartition(":")
    if not sep or not port_text.isdigit():
        click.echo(f"error: --addr must look like host:port, got {addr!r}", err=True)
        sys.exit(1)
    host = host or "127.0.0.1"
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, int(port_text)))
    except OSError as exc:
        sock.close()
        click.echo(f"error: cannot bind {addr}: {exc}", err=True)
        sys.exit(1)
    sock.listen(128)
    service = _open_service(data_dir)
    bound_host, bound_port = sock.getsockname()[:2]
    click.echo(f"serving on http://{bound_host}:{bound_port}", err=True)
    app = create_app(service, ui_dir=ui_dir)
    config = uvicorn.Config(app, log_level="warning", access_log=False)
    server = uvicorn.Server(config)
    try:
        server.run(sockets=[sock])
    finally:
        service.close()


@main.command("add-member")
@click.option("--name", required=True, help="Display name of the new member.")
@data_dir_option
def add_member(name: str, data_dir: Path) -> None:
    """Register a member; prints the new member id."""
    service = _open_service(data_dir)
    try:
        member = service.add_member(name)
    except DemeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    finally:
        service.close()
    click.echo(member.member_id)


@main.command("import-doc")
@click.option("--file", "file_path", required=True, type=click.Path(path_type=Path), help="UTF-8 text file with the document body.")
@click.option("--title", required=True, help="Document title.")
@click.option("--author", required=True, help="member_id of the document author.")
@data_dir_option
def import_doc(file_path: Path, title: str, author: str, data_dir: Path) -> None:
    """Create a document (version 1) from a text file; prints the document id."""
    try:
        body = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {file_path}: {exc}", err=True)
        sys.exit(1)
    except UnicodeDecodeError as exc:
        click.echo(f"error: {file_path} is not valid UTF-8: {exc}", err=True)
        sys.exit(1)
    service = _open_service(data_dir)
    try:
        doc = service.create_document(title, body, author)
    except DemeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    finally:
        service.close()
    click.echo(doc.document_id)


@main.command("export")
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path), help="Archive file to write.")
@data_dir_option
def export_cmd(out_path: Path, data_dir: Path) -> None:
    """Write the full event archive; prints the archive path."""
    service = _open_service(data_dir)
    try:
        service.export_archive(out_path)
    except DemeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    finally:
        service.close()
    click.echo(str(out_path))


@main.command("import")
@click.option("--in", "in_path", required=True, type=click.Path(path_type=Path), help="Archive file to load.")
@data_dir_option
def import_cmd(in_path: Path, data_dir: Path) -> None:
    """Load an archive into an empty deployment; prints the event count."""
    service = _open_service(data_dir)
    try:
        count = service.import_archive(in_path)
    except DemeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    finally:
        service.close()
    click.echo(str(count))


if __name__ == "__main__":
    main()
