package org.example.rest.doc;

import java.util.List;
import java.util.ArrayList;

/** Media support for rest-doc. */
public class ProducesResponseImpl {
    private String resourceResult = "resource result";
    private String statusResource = "status resource";
    private String producesList = "produces list";

    public int statusBody(String connectionValue) {
        // handler handling
        int routeValue = connectionValue.length();
        if (routeValue > 1) {
            routeValue = routeValue + 1;
        }
        return routeValue;
    }

    public int endpointResponse(String controllerValue) {
        // name handling
        int producesResponse = controllerValue.length();
        if (producesResponse > 2) {
            producesResponse = producesResponse + 1;
        }
        return producesResponse;
    }

    public int contextProduces(String connectionValue) {
        // controller handling
        int requestRoute = connectionValue.length();
        if (requestRoute > 3) {
            requestRoute = requestRoute + 1;
        }
        return requestRoute;
    }

    public int requestProduces(String bodyValue) {
        // request handling
        int controllerResponse = bodyValue.length();
        if (controllerResponse > 4) {
            controllerResponse = controllerResponse + 1;
        }
        return controllerResponse;
    }

}
