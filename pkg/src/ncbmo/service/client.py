"""CLI-facing clients: in-process by default, HTTP when a server is given."""
from __future__ import annotations

import httpx

from . import handlers


class ServiceError(RuntimeError):
    """Transport or validation failure; the CLI maps this to exit code 2."""


class LocalClient:
    """Calls the service handlers in process; no server required."""

    def default_config(self) -> dict:
        return handlers.handle_default_config()

    def verify(self, seed: int = 0) -> dict:
        return handlers.handle_verify(seed)

    def bench(self, name: str, config_doc: dict) -> dict:
        try:
            return handlers.handle_bench(name, config_doc)
        except KeyError as exc:
            raise ServiceError(str(exc)) from None

    def dilation(self, config_doc: dict) -> dict:
        return handlers.handle_dilation(config_doc)


class HttpClient:
    """Same interface over HTTP against a running service."""

    def __init__(self, base_url: str, timeout: float = 600.0):
        self._client = httpx.Client(base_url=base_url.rstrip("/"),
                                    timeout=timeout)

    def _call(self, method: str, path: str, json_doc: dict = None) -> dict:
        try:
            resp = self._client.request(method, path, json=json_doc)
        except httpx.HTTPError as exc:
            raise ServiceError(f"cannot reach server: {exc}") from None
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise ServiceError(f"server returned {resp.status_code}: {detail}")
        return resp.json()

    def default_config(self) -> dict:
        return self._call("GET", "/config/default")

    def verify(self, seed: int = 0) -> dict:
        return self._call("POST", "/verify", {"seed": int(seed)})

    def bench(self, name: str, config_doc: dict) -> dict:
        return self._call("POST", f"/bench/{name}", {"config": config_doc})

    def dilation(self, config_doc: dict) -> dict:
        return self._call("POST", "/dilation", {"config": config_doc})
